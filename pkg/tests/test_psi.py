# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Tests for `ordcalc.psi` module.
"""
import itertools
import logging
import unittest

from hypothesis import given, settings, strategies as st

from ordcalc import cnf
from ordcalc import psi
from ordcalc.exceptions import ParseError, PsiError, PsiNormalFormError
from ordcalc.ordering import Order
from ordcalc.psi import OmegaPow, PsiApp, PsiSum, ONE, OMEGA, ZERO


logger = logging.getLogger(__name__)


SMALL_TERMS = list(psi.enumerate_psi(5))
TWO = psi.nat_psi(2)
SMALL_OMEGA = PsiApp(ONE)


def omega_plus(term):
    return OmegaPow(psi.add_psi(OMEGA, term))


class TestPsiGSet(unittest.TestCase):

    def test_omega(self):
        self.assertEqual(psi.g_set(OMEGA), frozenset())
        self.assertEqual(psi.g_set(ZERO), frozenset())

    def test_psi_of_omega(self):
        self.assertEqual(psi.g_set(PsiApp(OMEGA)), frozenset({OMEGA}))

    def test_omega_power(self):
        self.assertEqual(psi.g_set(omega_plus(ONE)), frozenset({ZERO}))


class TestPsiNormalForm(unittest.TestCase):

    def test_psi_zero(self):
        self.assertTrue(psi.is_nf(ONE))

    def test_psi_of_psi_zero(self):
        self.assertTrue(psi.is_nf(SMALL_OMEGA))

    def test_psi_of_psi_of_omega(self):
        self.assertFalse(psi.is_nf(PsiApp(PsiApp(OMEGA))))

    def test_enumeration_is_normal(self):
        for term in SMALL_TERMS:
            self.assertTrue(psi.is_nf(term))
            self.assertTrue(psi.is_valid_psi(term))

    def test_compare_rejects_non_normal(self):
        with self.assertRaises(PsiNormalFormError):
            psi.cmp_psi(PsiApp(PsiApp(OMEGA)), ONE)


class TestPsiValidation(unittest.TestCase):

    def test_small_omega_power(self):
        report = psi.validate_psi(OmegaPow(ONE))
        self.assertFalse(report.ok)

    def test_increasing_sum(self):
        self.assertFalse(psi.is_valid_psi(PsiSum((ONE, OMEGA))))

    def test_singleton_sum(self):
        self.assertFalse(psi.is_valid_psi(PsiSum((ONE,))))

    def test_nested_sum(self):
        self.assertFalse(psi.is_valid_psi(PsiSum((PsiSum((OMEGA, ONE)), ONE))))


class TestPsiCompare(unittest.TestCase):

    def test_one_below_omega(self):
        self.assertEqual(psi.cmp_psi(ONE, SMALL_OMEGA), Order.LT)

    def test_psi_values_below_omega(self):
        self.assertEqual(psi.cmp_psi(PsiApp(OMEGA), OMEGA), Order.LT)

    def test_monotone_in_argument(self):
        self.assertEqual(psi.cmp_psi(PsiApp(omega_plus(ONE)), PsiApp(omega_plus(SMALL_OMEGA))), Order.LT)

    def test_trichotomy(self):
        for left, right in itertools.product(SMALL_TERMS, repeat=2):
            self.assertEqual(psi.cmp_psi(left, right), psi.cmp_psi(right, left).flip())
            self.assertEqual(psi.cmp_psi(left, right) == Order.EQ, left == right)

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from(SMALL_TERMS), st.sampled_from(SMALL_TERMS), st.sampled_from(SMALL_TERMS))
    def test_transitivity(self, a, b, c):
        if psi.psi_less(a, b) and psi.psi_less(b, c):
            self.assertTrue(psi.psi_less(a, c))


class TestPsiConstructors(unittest.TestCase):

    def test_no_absorption(self):
        self.assertEqual(psi.add_psi(OMEGA, ONE), PsiSum((OMEGA, ONE)))

    def test_absorption(self):
        self.assertEqual(psi.add_psi(ONE, OMEGA), OMEGA)

    def test_omega_pow_needs_large_exponent(self):
        with self.assertRaises(PsiError):
            psi.omega_pow(ONE)

    def test_omega_pow(self):
        self.assertEqual(psi.omega_pow(psi.succ_psi(OMEGA)), omega_plus(ONE))

    def test_nat_psi(self):
        self.assertEqual(psi.nat_psi(0), ZERO)
        self.assertEqual(psi.nat_psi(1), ONE)
        self.assertEqual(TWO, PsiSum((ONE, ONE)))

    def test_omega_exp(self):
        self.assertEqual(psi.omega_exp(ONE), SMALL_OMEGA)
        self.assertEqual(psi.omega_exp(OMEGA), OMEGA)
        self.assertEqual(psi.omega_exp(psi.succ_psi(OMEGA)), omega_plus(ONE))


class TestPsiClosure(unittest.TestCase):

    def test_constants(self):
        self.assertTrue(psi.h_member(ZERO, (), OMEGA))
        self.assertTrue(psi.h_member(ZERO, (), ZERO))

    def test_small_omega_below_two(self):
        self.assertTrue(psi.h_member(TWO, (), SMALL_OMEGA))

    def test_small_omega_not_below_one(self):
        self.assertFalse(psi.h_member(ONE, (), SMALL_OMEGA))

    def test_extras(self):
        self.assertTrue(psi.h_member(ZERO, {SMALL_OMEGA}, PsiSum((SMALL_OMEGA, SMALL_OMEGA))))

    def test_monotone(self):
        terms = list(psi.enumerate_psi(4))
        for gamma, wider, term in itertools.product(terms, repeat=3):
            if psi.psi_less(wider, gamma):
                continue
            if psi.h_member(gamma, (), term):
                self.assertTrue(psi.h_member(wider, {ONE}, term))


class TestPsiCollapsing(unittest.TestCase):

    def test_hat_zero(self):
        self.assertEqual(psi.hat(ZERO, ZERO), OMEGA)

    def test_hat_absorbs(self):
        self.assertEqual(psi.hat(ONE, ONE), omega_plus(ONE))

    def test_hat_absorbs_smaller_power(self):
        self.assertEqual(psi.hat(omega_plus(ONE), SMALL_OMEGA), omega_plus(SMALL_OMEGA))

    def test_first_step(self):
        steps = psi.collapse_steps(ZERO, ZERO, 1)
        self.assertEqual(steps.b_m, OMEGA)
        self.assertEqual(steps.beta_m, PsiApp(OMEGA))

    def test_steps_increase(self):
        first, second = psi.collapse_steps(ZERO, ZERO, 1), psi.collapse_steps(ZERO, ZERO, 2)
        self.assertEqual(second.b_m, PsiSum((OMEGA, OMEGA)))
        self.assertEqual(psi.cmp_psi(first.beta_m, second.beta_m), Order.LT)

    def test_five_steps(self):
        steps = psi.collapse_steps(ZERO, SMALL_OMEGA, 5)
        self.assertEqual(steps.b_m, PsiSum((omega_plus(SMALL_OMEGA),) * 5))
        self.assertTrue(psi.is_nf(steps.beta_m))

    def test_bad_step_count(self):
        with self.assertRaises(PsiError):
            psi.collapse_steps(ZERO, ZERO, 0)

    def test_collapsing_bound(self):
        index, height = psi.collapsing_bound(ZERO, ZERO)
        self.assertEqual(index, PsiSum((OMEGA, ONE)))
        self.assertEqual(height, PsiApp(OMEGA))

    def test_norm_bound(self):
        self.assertEqual(psi.norm_bound(ONE), PsiApp(omega_plus(ONE)))


class TestPsiCountableFragment(unittest.TestCase):

    def test_anchors(self):
        self.assertEqual(psi.eval_countable_psi(ONE), cnf.ONE)
        self.assertEqual(psi.eval_countable_psi(SMALL_OMEGA), cnf.OMEGA)

    def test_uncountable(self):
        self.assertFalse(psi.is_countable_psi(PsiApp(OMEGA)))
        with self.assertRaises(PsiError):
            psi.eval_countable_psi(OMEGA)

    def test_order_agrees_with_cnf(self):
        countable = [t for t in psi.enumerate_psi(6) if psi.is_countable_psi(t)]
        for left, right in itertools.combinations(countable, 2):
            expected = Order.of(psi.eval_countable_psi(left).compare(psi.eval_countable_psi(right)))
            self.assertEqual(psi.cmp_psi(left, right), expected)

    def test_minimality(self):
        for target in (ONE, SMALL_OMEGA, PsiApp(TWO)):
            report = psi.psi_minimality(target, 6, margin=2)
            self.assertTrue(report.ok, report.render())

    def test_minimality_needs_application(self):
        with self.assertRaises(PsiError):
            psi.psi_minimality(TWO, 4)


class TestPsiWireSyntax(unittest.TestCase):

    def test_round_trip(self):
        for term in SMALL_TERMS:
            self.assertEqual(psi.parse_psi(psi.to_sexpr(term)), term)

    def test_parse(self):
        self.assertEqual(psi.parse_psi('(sum Om (p 0))'), PsiSum((OMEGA, ONE)))
        self.assertEqual(psi.parse_psi('(w (sum Om (p 0)))'), omega_plus(ONE))

    def test_pretty(self):
        self.assertEqual(psi.pretty(psi.hat(ZERO, ONE)), 'w^(Om+p(0))')

    def test_malformed(self):
        for text in ('(w)', 'Omega', '(q 0)', '(p 0 0)'):
            with self.assertRaises(ParseError):
                psi.parse_psi(text)


if __name__ == '__main__':
    logging.basicConfig(level=logging.DEBUG)
    for case in (TestPsiGSet, TestPsiNormalForm, TestPsiValidation, TestPsiCompare, TestPsiConstructors,
                 TestPsiClosure, TestPsiCollapsing, TestPsiCountableFragment, TestPsiWireSyntax):
        test_suite = unittest.TestLoader().loadTestsFromTestCase(case)
        unittest.TextTestRunner(verbosity=2).run(test_suite)
