# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Tests for `ordcalc.controlled` module.
"""
import json
import logging
import os
import tempfile
import unittest

from ordcalc import controlled
from ordcalc import formula as fl
from ordcalc import operators
from ordcalc import psi
from ordcalc.controlled import certificate
from ordcalc.exceptions import CertificateError


logger = logging.getLogger(__name__)


ACC = operators.acc_entry('acc', fl.Rel('<', fl.Var('y'), fl.Var('x')))
ZERO_OP = operators.make_entry('zero', 'x', fl.Rel('=', fl.Var('x'), fl.ZERO_TERM))
REGISTRY = operators.OperatorRegistry([ACC, ZERO_OP])
TWO = psi.nat_psi(2)


def acc(n, stage=psi.OMEGA, positive=True, name='acc'):
    return fl.Fix(name, stage, fl.Num(n), positive)


def acc_certificate(n, gamma=psi.ONE):
    """
    Closure certificate of acc(n) for the relation y < x: the closure premise
    forall y (y !< n | acc(y)) is expanded for y <= n, y < n by recursion
    """
    height = 3 * (n + 1)
    instance = controlled.stage_instance(ACC, psi.OMEGA, n)
    branches = []
    for y in range(n + 1):
        disjunct = controlled.ground(fl.substitute(instance.body, {instance.var: fl.Num(y)}))
        if y < n:
            premise, index = acc_certificate(y, gamma), 1
        else:
            premise, index = certificate(gamma, psi.ZERO, 1, {fl.Rel('!<', fl.Num(n), fl.Num(n))}, 'initial'), 0
        branches.append(certificate(
            gamma, psi.nat_psi(height - 2), 1, {disjunct}, 'or', [premise], principal=disjunct, index=index
        ))
    universal = certificate(
        gamma, psi.nat_psi(height - 1), 1, {instance}, 'forall', branches,
        principal=instance, instances=list(range(n + 1)), schematic='y > %d by the first disjunct' % (n,)
    )
    return certificate(gamma, psi.nat_psi(height), 1, {acc(n)}, 'Cl', [universal], principal=acc(n))


class TestControlledRules(unittest.TestCase):

    def test_initial(self):
        cert = certificate(TWO, psi.ZERO, 1, {fl.TRUE}, 'initial')
        self.assertTrue(controlled.check_certificate(cert).ok)

    def test_initial_without_true_formula(self):
        cert = certificate(TWO, psi.ZERO, 1, {fl.FALSE, acc(1)}, 'initial')
        report = controlled.check_certificate(cert, REGISTRY)
        self.assertEqual([d.rule for d in report], ['initial'])

    def test_closure(self):
        premise = certificate(psi.ONE, psi.ZERO, 1, {acc(0, name='zero'), fl.TRUE}, 'initial')
        cert = certificate(psi.ONE, psi.ONE, 1, {acc(0, name='zero')}, 'Cl', [premise], principal=acc(0, name='zero'))
        self.assertTrue(controlled.check_certificate(cert, REGISTRY).ok)

    def test_closure_needs_a_lower_premise(self):
        premise = certificate(psi.ONE, psi.ONE, 1, {acc(0, name='zero'), fl.TRUE}, 'initial')
        cert = certificate(psi.ONE, psi.ONE, 1, {acc(0, name='zero')}, 'Cl', [premise], principal=acc(0, name='zero'))
        report = controlled.check_certificate(cert, REGISTRY)
        self.assertIn('not below', report.diagnostics[0].message)

    def test_cut_degree(self):
        cut = fl.Forall('x', fl.Fix('acc', psi.OMEGA, fl.Var('x')))
        premises = [
            certificate(TWO, psi.ZERO, 2, {fl.negate(cut)}, 'hypothesis'),
            certificate(TWO, psi.ZERO, 2, {cut}, 'hypothesis'),
        ]
        rejected = certificate(TWO, psi.ONE, 2, {fl.TRUE}, 'cut', premises, cut=cut)
        report = controlled.check_certificate(rejected, REGISTRY)
        self.assertEqual([d.rule for d in report], ['cut'])
        self.assertEqual(len(report.notes), 2)
        accepted = certificate(TWO, psi.ONE, 3, {fl.TRUE}, 'cut', premises, cut=cut)
        self.assertTrue(controlled.check_certificate(accepted, REGISTRY).ok)

    def test_control_condition(self):
        cert = certificate(psi.ZERO, psi.PsiApp(psi.ONE), 1, {fl.TRUE}, 'initial')
        report = controlled.check_certificate(cert)
        self.assertIn('control', report.diagnostics[0].message)

    def test_stage_control(self):
        stage = psi.PsiApp(TWO)
        cert = certificate(psi.ONE, psi.ZERO, 1, {fl.TRUE, acc(1, stage)}, 'initial')
        report = controlled.check_certificate(cert, REGISTRY)
        self.assertIn('stage', report.diagnostics[0].message)

    def test_degree_range(self):
        cert = certificate(psi.ONE, psi.ZERO, 4, {fl.TRUE}, 'initial')
        self.assertFalse(controlled.check_certificate(cert).ok)

    def test_open_formula(self):
        cert = certificate(psi.ONE, psi.ZERO, 1, {fl.Rel('=', fl.Var('x'), fl.Var('x'))}, 'initial')
        self.assertIn('not closed', controlled.check_certificate(cert).diagnostics[0].message)

    def test_unknown_rule(self):
        cert = certificate(psi.ONE, psi.ZERO, 1, {fl.TRUE}, 'omega')
        self.assertEqual([d.rule for d in controlled.check_certificate(cert)], ['omega'])

    def test_not_a_certificate(self):
        with self.assertRaises(CertificateError):
            controlled.check_certificate({'rule': 'initial'})

    def test_fixpoint_stage_rule(self):
        stage = psi.ONE
        side = controlled.stage_instance(ACC, stage, 0)
        premise = certificate(psi.ONE, psi.ZERO, 1, {acc(0, TWO), side}, 'hypothesis', extras={stage})
        cert = certificate(psi.ONE, TWO, 1, {acc(0, TWO)}, 'I', [premise], principal=acc(0, TWO), stage=stage)
        self.assertTrue(controlled.check_certificate(cert, REGISTRY).ok)

    def test_fixpoint_stage_must_be_below_the_atom(self):
        stage = TWO
        side = controlled.stage_instance(ACC, stage, 0)
        premise = certificate(psi.ONE, psi.ONE, 1, {side}, 'hypothesis', extras={stage})
        cert = certificate(psi.ONE, TWO, 1, {acc(0, TWO)}, 'I', [premise], principal=acc(0, TWO), stage=stage)
        report = controlled.check_certificate(cert, REGISTRY)
        self.assertIn('not below', report.diagnostics[0].message)


class TestComplementRule(unittest.TestCase):

    def setUp(self):
        self.stage = psi.ONE
        side = fl.negate(controlled.stage_instance(ACC, self.stage, 0))
        self.premise = certificate(psi.ONE, psi.ZERO, 1, {side}, 'hypothesis', extras={self.stage})

    def test_expanded_stage(self):
        cert = certificate(
            psi.ONE, psi.ONE, 1, {acc(0, positive=False)}, 'Ibar', [self.premise],
            principal=acc(0, positive=False), stages=[self.stage], schematic='every countable stage'
        )
        report = controlled.check_certificate(cert, REGISTRY)
        self.assertTrue(report.ok, report.render())
        self.assertTrue(any('schematic' in note for note in report.notes))

    def test_missing_required_stage(self):
        cert = certificate(
            psi.ONE, psi.ONE, 1, {acc(0, positive=False)}, 'Ibar', [self.premise],
            principal=acc(0, positive=False), stages=[self.stage], required_stages=[TWO]
        )
        report = controlled.check_certificate(cert, REGISTRY)
        self.assertIn('no premise for the stages', report.diagnostics[0].message)

    def test_stage_count(self):
        cert = certificate(
            psi.ONE, psi.ONE, 1, {acc(0, positive=False)}, 'Ibar', [self.premise],
            principal=acc(0, positive=False), stages=[]
        )
        self.assertFalse(controlled.check_certificate(cert, REGISTRY).ok)


class TestAccCertificates(unittest.TestCase):

    def test_accepted(self):
        for n in range(5):
            report = controlled.check_certificate(acc_certificate(n), REGISTRY)
            self.assertTrue(report.ok, report.render())

    def test_larger_operator_index(self):
        for n in range(4):
            self.assertTrue(controlled.check_certificate(acc_certificate(n, TWO), REGISTRY).ok)

    def test_json_round_trip(self):
        cert = acc_certificate(2)
        again = controlled.certificate_from_json(json.loads(json.dumps(controlled.certificate_to_json(cert))))
        self.assertEqual(controlled.certificate_to_json(again), controlled.certificate_to_json(cert))
        self.assertTrue(controlled.check_certificate(again, REGISTRY).ok)

    def test_load(self):
        with tempfile.TemporaryDirectory() as directory:
            path = os.path.join(directory, 'certificate.json')
            with open(path, 'w', encoding='utf-8') as handle:
                json.dump(controlled.document_to_json(acc_certificate(1), REGISTRY), handle)
            cert, registry = controlled.load_certificate(path)
        self.assertTrue(controlled.check_certificate(cert, registry).ok)


class TestBounding(unittest.TestCase):

    def test_bounding_family(self):
        count = 0
        for n in range(5):
            original = acc_certificate(n)
            height = 3 * (n + 1)
            for extra in (0, 1, 2, 5):
                with self.subTest(n=n, extra=extra):
                    b = psi.nat_psi(height + extra)
                    bounded = controlled.apply_bounding(original, b, REGISTRY)
                    report = controlled.check_certificate(bounded, REGISTRY)
                    self.assertTrue(report.ok, report.render())
                    self.assertEqual(bounded.rule, 'I')
                    self.assertEqual(bounded.sequent, frozenset({acc(n, b)}))
                    self.assertEqual(bounded.payload['stage'], psi.nat_psi(height - 1))
                    pairs = list(zip(controlled.nodes(original), controlled.nodes(bounded)))
                    self.assertEqual(len(pairs), len(list(controlled.nodes(original))))
                    for before, after in pairs:
                        self.assertEqual(after.bound, before.bound)
                        self.assertEqual(after.degree, before.degree)
                    count += 1
        self.assertGreaterEqual(count, 20)

    def test_no_fixpoint_atoms(self):
        cert = certificate(psi.ONE, psi.ZERO, 1, {fl.TRUE}, 'initial')
        self.assertIs(controlled.apply_bounding(cert, psi.ONE), cert)

    def test_degree_two(self):
        cert = certificate(psi.ONE, psi.ZERO, 2, {fl.TRUE}, 'initial')
        with self.assertRaises(CertificateError):
            controlled.apply_bounding(cert, psi.ONE)

    def test_rejected_input(self):
        cert = certificate(psi.ONE, psi.ZERO, 1, {fl.FALSE}, 'initial')
        with self.assertRaises(CertificateError):
            controlled.apply_bounding(cert, psi.ONE)

    def test_stage_below_height(self):
        with self.assertRaises(CertificateError):
            controlled.apply_bounding(acc_certificate(1), psi.nat_psi(2), REGISTRY)

    def test_stage_outside_operator(self):
        with self.assertRaises(CertificateError):
            controlled.apply_bounding(acc_certificate(0), psi.PsiApp(TWO), REGISTRY)

    def test_negative_sequent(self):
        cert = certificate(psi.ONE, psi.ZERO, 1, {fl.TRUE, acc(0, positive=False)}, 'initial')
        with self.assertRaises(CertificateError):
            controlled.apply_bounding(cert, psi.ONE, REGISTRY)


if __name__ == '__main__':
    logging.basicConfig(level=logging.DEBUG)
    for case in (TestControlledRules, TestComplementRule, TestAccCertificates, TestBounding):
        test_suite = unittest.TestLoader().loadTestsFromTestCase(case)
        unittest.TextTestRunner(verbosity=2).run(test_suite)
