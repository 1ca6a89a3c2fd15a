# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Tests for `ordcalc.theta` module.
"""
import functools
import itertools
import logging
import unittest

from hypothesis import given, settings, strategies as st

from ordcalc import cnf
from ordcalc import theta
from ordcalc.exceptions import ParseError, ThetaError
from ordcalc.ordering import Order
from ordcalc.theta import Monomial, ThetaApp, ThetaSum, ONE, OMEGA, ZERO


logger = logging.getLogger(__name__)


SMALL_TERMS = list(theta.enumerate_theta(6))


@functools.lru_cache(maxsize=None)
def naive_terms(size):
    """
    Every term tree with ``size`` nodes, valid or not
    """
    if size < 1:
        return ()
    if size == 1:
        return (ZERO,)
    found = [ThetaApp(argument) for argument in naive_terms(size - 1)]
    found.extend(ThetaSum(monomials) for monomials in naive_monomial_lists(size - 1))
    return tuple(found)


@functools.lru_cache(maxsize=None)
def naive_apps(budget):
    if budget < 1:
        return ((),) if budget == 0 else ()
    result = []
    for first in range(2, budget + 1):
        for app in naive_terms(first):
            if isinstance(app, ThetaApp):
                result.extend((app,) + rest for rest in naive_apps(budget - first))
    return tuple(result)


@functools.lru_cache(maxsize=None)
def naive_monomial_lists(budget):
    result = []
    for exponent_size in range(1, budget):
        for coefficient_size in range(2, budget - exponent_size + 1):
            for exponent in naive_terms(exponent_size):
                for coefficient in naive_apps(coefficient_size):
                    if not coefficient:
                        continue
                    mono = Monomial(exponent, coefficient)
                    rest = budget - exponent_size - coefficient_size
                    if rest == 0:
                        result.append((mono,))
                    else:
                        result.extend((mono,) + tail for tail in naive_monomial_lists(rest))
    return tuple(result)


class TestThetaValidation(unittest.TestCase):

    def test_omega_is_valid(self):
        self.assertTrue(theta.is_valid_theta(OMEGA))

    def test_single_countable_monomial_is_invalid(self):
        report = theta.validate_theta(ThetaSum((Monomial(ZERO, (ONE,)),)))
        self.assertFalse(report.ok)
        self.assertEqual(report.diagnostics[0].path, 'term')

    def test_feferman_schutte_is_valid(self):
        self.assertTrue(theta.is_valid_theta(theta.FEFERMAN_SCHUTTE))
        self.assertTrue(theta.is_valid_theta(theta.SMALL_VEBLEN))

    def test_increasing_exponents_are_reported_with_a_path(self):
        term = ThetaSum((Monomial(ONE, (ONE,)), Monomial(theta.nat_theta(2), (ONE,))))
        report = theta.validate_theta(term)
        self.assertFalse(report.ok)
        self.assertIn('mono[1]', report.diagnostics[0].path)

    def test_increasing_coefficient_is_reported(self):
        term = ThetaSum((Monomial(ONE, (ONE, theta.theta(ONE))),))
        self.assertFalse(theta.is_valid_theta(term))


class TestThetaKSet(unittest.TestCase):

    def test_zero(self):
        self.assertEqual(theta.k_set(ZERO), frozenset())

    def test_application(self):
        term = theta.theta(theta.monomial(ONE, theta.theta(ONE)))
        self.assertEqual(theta.k_set(term), frozenset({term}))

    def test_omega(self):
        self.assertEqual(theta.k_set(OMEGA), frozenset({ONE}))


class TestThetaCompare(unittest.TestCase):

    def test_zero_is_least(self):
        self.assertEqual(theta.cmp_theta(ZERO, ONE), Order.LT)

    def test_one_below_omega(self):
        self.assertEqual(theta.cmp_theta(ONE, theta.theta(ONE)), Order.LT)

    def test_below_feferman_schutte(self):
        omega_times_omega = theta.monomial(ONE, theta.theta(ONE))
        self.assertEqual(theta.cmp_theta(theta.theta(omega_times_omega), theta.FEFERMAN_SCHUTTE), Order.LT)

    def test_countable_below_omega(self):
        self.assertEqual(theta.cmp_theta(theta.FEFERMAN_SCHUTTE, OMEGA), Order.LT)

    def test_trichotomy_on_small_terms(self):
        for left, right in itertools.product(SMALL_TERMS, repeat=2):
            forward, backward = theta.cmp_theta(left, right), theta.cmp_theta(right, left)
            self.assertEqual(forward, backward.flip())
            self.assertEqual(forward == Order.EQ, left == right)

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from(SMALL_TERMS), st.sampled_from(SMALL_TERMS), st.sampled_from(SMALL_TERMS))
    def test_transitivity(self, a, b, c):
        if theta.cmp_theta(a, b) == Order.LT and theta.cmp_theta(b, c) == Order.LT:
            self.assertEqual(theta.cmp_theta(a, c), Order.LT)


class TestThetaArithmetic(unittest.TestCase):

    def test_right_identity(self):
        for term in SMALL_TERMS:
            self.assertEqual(theta.add_theta(term, ZERO), term)

    def test_absorption(self):
        omega = theta.theta(ONE)
        self.assertEqual(theta.add_theta(ONE, omega), omega)

    def test_no_absorption(self):
        omega = theta.theta(ONE)
        self.assertEqual(theta.add_theta(omega, ONE), ThetaSum((Monomial(ZERO, (omega, ONE)),)))
        self.assertEqual(theta.pretty(theta.add_theta(omega, ONE)), 'v(v(0))+v(0)')

    @settings(max_examples=200, deadline=None)
    @given(st.sampled_from(SMALL_TERMS), st.sampled_from(SMALL_TERMS))
    def test_sum_is_valid_and_not_smaller(self, a, b):
        total = theta.add_theta(a, b)
        self.assertTrue(theta.is_valid_theta(total))
        self.assertNotEqual(theta.cmp_theta(total, b), Order.LT)

    def test_nat_theta(self):
        self.assertEqual(theta.nat_theta(0), ZERO)
        self.assertEqual(theta.nat_theta(1), ONE)
        with self.assertRaises(ThetaError):
            theta.nat_theta(-1)


class TestThetaEnumeration(unittest.TestCase):

    def test_size_one(self):
        self.assertEqual(list(theta.enumerate_theta(1)), [ZERO])

    def test_size_two(self):
        self.assertEqual(list(theta.enumerate_theta(2)), [ZERO, ONE])

    def test_no_duplicates(self):
        self.assertEqual(len(SMALL_TERMS), len(set(SMALL_TERMS)))

    def test_matches_naive_generate_and_filter(self):
        naive = {t for size in range(1, 7) for t in naive_terms(size) if theta.is_valid_theta(t)}
        self.assertEqual(naive, set(SMALL_TERMS))
        self.assertEqual(theta.count_theta(6), len(naive))

    def test_sizes(self):
        for term in SMALL_TERMS:
            self.assertLessEqual(theta.theta_size(term), 6)

    def test_bad_bound(self):
        with self.assertRaises(ThetaError):
            list(theta.enumerate_theta(0))


class TestThetaEvaluation(unittest.TestCase):

    def test_anchors(self):
        self.assertEqual(theta.eval_countable_theta(ONE), cnf.ONE)
        self.assertEqual(theta.eval_countable_theta(theta.theta(ONE)), cnf.OMEGA)
        self.assertEqual(
            theta.eval_countable_theta(theta.theta(theta.nat_theta(2))),
            cnf.omega_exp(cnf.CNF.of(2))
        )

    def test_uncountable_is_rejected(self):
        with self.assertRaises(ThetaError):
            theta.eval_countable_theta(OMEGA)

    def test_oracle_agreement(self):
        countable = [t for t in SMALL_TERMS if theta.is_countable_theta(t)]
        for left, right in itertools.combinations(countable, 2):
            expected = Order.of(theta.eval_countable_theta(left).compare(theta.eval_countable_theta(right)))
            self.assertEqual(theta.cmp_theta(left, right), expected)


class TestThetaWireSyntax(unittest.TestCase):

    def test_round_trip(self):
        for term in SMALL_TERMS:
            self.assertEqual(theta.parse_theta(theta.to_sexpr(term)), term)

    def test_parse(self):
        self.assertEqual(theta.parse_theta('(v 0)'), ONE)
        self.assertEqual(theta.parse_theta('(sum (mono (v 0) (cs (v 0))))'), OMEGA)

    def test_pretty(self):
        self.assertEqual(theta.pretty(OMEGA), 'O')
        self.assertEqual(theta.pretty(theta.FEFERMAN_SCHUTTE), 'v(O^(v(0)+v(0)))')

    def test_malformed(self):
        for text in ('(w 0)', 'Om', '(sum (mono 0 (v 0)))', '(sum (mono 0 (cs 0)))'):
            with self.assertRaises(ParseError):
                theta.parse_theta(text)


if __name__ == '__main__':
    logging.basicConfig(level=logging.DEBUG)
    for case in (TestThetaValidation, TestThetaKSet, TestThetaCompare, TestThetaArithmetic,
                 TestThetaEnumeration, TestThetaEvaluation, TestThetaWireSyntax):
        test_suite = unittest.TestLoader().loadTestsFromTestCase(case)
        unittest.TextTestRunner(verbosity=2).run(test_suite)
