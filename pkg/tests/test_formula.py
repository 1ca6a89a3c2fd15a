# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Tests for `ordcalc.formula` module.
"""
import logging
import unittest

from hypothesis import given, settings, strategies as st

from ordcalc import formula as fl
from ordcalc import psi
from ordcalc.exceptions import FormulaError, ParseError


logger = logging.getLogger(__name__)


x, y = fl.Var('x'), fl.Var('y')


def fix(arg, stage=psi.OMEGA, positive=True, name='phi'):
    return fl.Fix(name, stage, fl.Num(arg) if isinstance(arg, int) else arg, positive)


SMALL_OMEGA = psi.PsiApp(psi.ONE)
ACC_BODY = fl.Forall('y', fl.implies(fl.Rel('<', y, x), fl.SetAtom('X', y)))

atoms = st.one_of(
    st.builds(lambda a, b: fl.Rel('<', fl.Num(a), fl.Num(b)), st.integers(0, 3), st.integers(0, 3)),
    st.builds(lambda n, p: fix(n, positive=p), st.integers(0, 3), st.booleans()),
    st.builds(lambda n, p: fix(n, SMALL_OMEGA, p), st.integers(0, 3), st.booleans()),
)
formulas = st.recursive(
    atoms,
    lambda inner: st.one_of(
        st.builds(fl.And, inner, inner),
        st.builds(fl.Or, inner, inner),
        st.builds(lambda body: fl.Forall('x', body), inner),
        st.builds(lambda body: fl.Exists('x', body), inner),
        st.builds(lambda body: fl.BForall('x', fl.Num(2), body), inner),
    ),
    max_leaves=8,
)


class TestFormulaTerms(unittest.TestCase):

    def test_pairing(self):
        for a in range(20):
            for b in range(20):
                self.assertEqual(fl.unpair(fl.pair(a, b)), (a, b))

    def test_eval(self):
        term = fl.Add(fl.Mul(fl.Num(3), x), fl.Exp2(fl.Succ(fl.Num(1))))
        self.assertEqual(fl.eval_term(term, {'x': 5}), 19)
        self.assertEqual(fl.eval_term(fl.P1(fl.Num(fl.pair(4, 7)))), 7)

    def test_unbound_variable(self):
        with self.assertRaises(FormulaError):
            fl.eval_term(x)


class TestFormulaNegation(unittest.TestCase):

    def test_relation(self):
        self.assertEqual(fl.negate(fl.Rel('=', x, y)), fl.Rel('!=', x, y))

    def test_fixpoint_atom(self):
        self.assertEqual(fl.negate(fix(x)), fix(x, positive=False))

    def test_acc_body(self):
        negated = fl.negate(ACC_BODY)
        self.assertEqual(negated, fl.Exists('y', fl.And(fl.Rel('<', y, x), fl.SetAtom('X', y, False))))

    @settings(max_examples=200, deadline=None)
    @given(formulas)
    def test_involution(self, formula):
        self.assertEqual(fl.negate(fl.negate(formula)), formula)

    @settings(max_examples=200, deadline=None)
    @given(formulas)
    def test_degree_is_symmetric(self, formula):
        try:
            degree = fl.dg(formula)
        except FormulaError:
            with self.assertRaises(FormulaError):
                fl.dg(fl.negate(formula))
            return
        self.assertEqual(fl.dg(fl.negate(formula)), degree)


class TestFormulaPolarity(unittest.TestCase):

    def test_positive(self):
        self.assertEqual(fl.polarity(fix(3)), {'phi': fl.Polarity.POS_ONLY})

    def test_both(self):
        self.assertEqual(fl.polarity(fl.And(fix(3, positive=False), fix(4))), {'phi': fl.Polarity.BOTH})

    def test_stage_tagged_atoms_do_not_count(self):
        formula = fl.And(fix(3, SMALL_OMEGA), fix(4, SMALL_OMEGA, False))
        self.assertEqual(fl.polarity(formula), {})
        self.assertTrue(fl.is_positive(formula))
        self.assertTrue(fl.is_negative(formula))


class TestFormulaClassification(unittest.TestCase):

    def test_acc_shape(self):
        self.assertTrue(fl.classify(ACC_BODY).is_acc_formula)
        self.assertFalse(fl.classify(fl.Forall('y', fl.SetAtom('X', y))).is_acc_formula)

    def test_positive_and_negative(self):
        forward = fl.classify(fl.And(fix(1), fix(2, positive=False)))
        backward = fl.classify(fl.And(fix(2, positive=False), fix(1)))
        self.assertTrue(forward.is_p_and_n)
        self.assertTrue(backward.is_p_and_n)
        self.assertFalse(forward.is_pos)

    def test_negative_or_positive(self):
        result = fl.classify(fl.Or(fix(2, positive=False), fix(1)))
        self.assertTrue(result.is_n_or_p)
        self.assertFalse(result.is_p_and_n)

    def test_universal_rank(self):
        result = fl.classify(fl.Forall('x', fix(x)))
        self.assertEqual(result.pi_rank_P, 1)
        self.assertEqual(result.sigma_rank_P, 2)

    def test_rank_zero(self):
        result = fl.classify(fl.Or(fix(1), fl.Rel('<', fl.Num(0), fl.Num(1))))
        self.assertEqual((result.pi_rank_P, result.sigma_rank_P), (0, 0))
        self.assertEqual((result.pi_rank_Omega, result.sigma_rank_Omega), (0, 0))

    def test_alternation(self):
        formula = fl.Forall('x', fl.Exists('y', fix(fl.Add(x, y))))
        result = fl.classify(formula, infinitary=True)
        self.assertEqual(result.pi_rank_P, 2)
        self.assertEqual(fl.dg(formula), 3)

    def test_guarded_quantifier_is_rank_zero(self):
        self.assertTrue(fl.is_rank0(fl.Forall('y', fl.implies(fl.Rel('<', y, x), fix(y)))))
        self.assertFalse(fl.is_rank0(fl.Forall('y', fix(y))))

    @settings(max_examples=100, deadline=None)
    @given(formulas)
    def test_grounding_never_raises_ranks(self, formula):
        closed = fl.Forall('x', formula) if fl.free_vars(formula) else formula
        before, after = fl.classify(closed), fl.classify(fl.ground_bounded(closed))
        for field in ('pi_rank_P', 'sigma_rank_P'):
            old, new = getattr(before, field), getattr(after, field)
            if old is not None:
                self.assertIsNotNone(new)
                self.assertLessEqual(new, old)


class TestFormulaDegree(unittest.TestCase):

    def test_arithmetic(self):
        self.assertEqual(fl.dg(fl.Rel('=', fl.Num(0), fl.Num(0))), 0)

    def test_atom(self):
        self.assertEqual(fl.dg(fix(3)), 1)

    def test_universal(self):
        self.assertEqual(fl.dg(fl.Forall('x', fix(x))), 2)

    def test_stage_atoms_only(self):
        self.assertEqual(fl.dg(fl.Forall('x', fix(x, SMALL_OMEGA))), 0)


class TestFormulaGrounding(unittest.TestCase):

    def test_bounded_existential(self):
        formula = fl.BExists('x', fl.Num(3), fl.Rel('=', x, fl.Num(2)))
        expected = fl.BigOr(tuple(fl.Rel('=', fl.Num(i), fl.Num(2)) for i in range(3)))
        self.assertEqual(fl.ground_bounded(formula), expected)

    def test_empty_conjunction(self):
        grounded = fl.ground_bounded(fl.BForall('x', fl.Num(0), fix(x)))
        self.assertEqual(grounded, fl.BigAnd(()))
        self.assertTrue(fl.evaluate(grounded))

    def test_fixpoint_atoms(self):
        grounded = fl.ground_bounded(fl.BForall('x', fl.Num(2), fix(x)))
        self.assertEqual(grounded, fl.BigAnd((fix(0), fix(1))))

    def test_closed_terms_become_numerals(self):
        grounded = fl.ground_bounded(fl.Rel('<', fl.Add(fl.Num(2), fl.Num(2)), fl.Exp2(fl.Num(3))))
        self.assertEqual(grounded, fl.Rel('<', fl.Num(4), fl.Num(8)))

    def test_open_formula(self):
        with self.assertRaises(FormulaError):
            fl.ground_bounded(fl.Rel('=', x, fl.Num(0)))


class TestFormulaBounding(unittest.TestCase):

    def test_positive_atom(self):
        self.assertEqual(fl.bound_positive(fix(3), SMALL_OMEGA), fix(3, SMALL_OMEGA))

    def test_negative_atom(self):
        self.assertEqual(fl.bound_positive(fix(3, positive=False), SMALL_OMEGA), fix(3, positive=False))

    def test_mixed(self):
        formula = fl.Or(fix(1), fix(2, positive=False))
        self.assertEqual(fl.bound_positive(formula, SMALL_OMEGA), fl.Or(fix(1, SMALL_OMEGA), fix(2, positive=False)))

    def test_mask(self):
        formula = fl.And(fix(1), fix(2))
        self.assertEqual(fl.bound_positive(formula, SMALL_OMEGA, mask={1}), fl.And(fix(1), fix(2, SMALL_OMEGA)))


class TestFormulaSubstitution(unittest.TestCase):

    def test_capture_is_avoided(self):
        formula = fl.Exists('y', fl.Rel('<', x, y))
        result = fl.substitute(formula, {'x': y})
        self.assertNotEqual(result.var, 'y')
        self.assertEqual(fl.free_vars(result), frozenset({'y'}))

    def test_bound_variable_is_untouched(self):
        formula = fl.Forall('x', fl.Rel('=', x, x))
        self.assertEqual(fl.substitute(formula, {'x': fl.Num(1)}), formula)

    def test_canonical_shape(self):
        coerced = fl.coerce_canonical(fl.Or(fix(1), fix(2, positive=False)))
        self.assertIsInstance(coerced, fl.BigOr)
        self.assertEqual(len(coerced.parts), 2)
        for conjunct in coerced.parts:
            for implication in conjunct.parts:
                self.assertTrue(fl.is_positive(implication.right))


class TestFormulaJson(unittest.TestCase):

    def test_round_trip(self):
        formula = fl.Forall('y', fl.Or(fix(y, SMALL_OMEGA, False), fl.BExists('z', fl.P0(y), fl.SetAtom('X', fl.Var('z')))))
        self.assertEqual(fl.formula_from_json(fl.formula_to_json(formula)), formula)

    def test_sugar(self):
        document = {
            'kind': 'implies',
            'left': {'kind': 'lt', 'left': 'y', 'right': 'x'},
            'right': {'kind': 'not', 'body': {'kind': 'fix', 'name': 'phi', 'arg': 'y'}},
        }
        self.assertEqual(
            fl.formula_from_json(document),
            fl.Or(fl.Rel('!<', y, x), fix(y, positive=False))
        )

    def test_malformed(self):
        for document in ({'kind': 'eq', 'left': 0}, {'kind': 'xor'}, [], {'kind': 'eq', 'left': -1, 'right': 0}):
            with self.assertRaises(ParseError):
                fl.formula_from_json(document)


if __name__ == '__main__':
    logging.basicConfig(level=logging.DEBUG)
    for case in (TestFormulaTerms, TestFormulaNegation, TestFormulaPolarity, TestFormulaClassification,
                 TestFormulaDegree, TestFormulaGrounding, TestFormulaBounding, TestFormulaSubstitution,
                 TestFormulaJson):
        test_suite = unittest.TestLoader().loadTestsFromTestCase(case)
        unittest.TextTestRunner(verbosity=2).run(test_suite)
