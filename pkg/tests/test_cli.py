# Copyright (c) 2015, Yahoo Inc.
# Copyrights licensed under the New BSD License
# See the accompanying LICENSE.txt file for terms.
"""
Tests for the ``ordcalc`` command.
"""
import json
import logging
import os
import shutil
import tempfile
import unittest

from click.testing import CliRunner

from ordcalc import cli


logger = logging.getLogger(__name__)


PROOFS = os.path.join(os.path.dirname(__file__), 'fixtures', 'proofs')

ACC_OPERATOR = {
    'name': 'acc', 'var': 'x',
    'body': {'kind': 'forall', 'var': 'y', 'body': {
        'kind': 'implies', 'left': {'kind': 'lt', 'left': 'y', 'right': 'x'},
        'right': {'kind': 'in', 'set': 'X', 'arg': 'y'}}},
}


class TestCommandLine(unittest.TestCase):

    def setUp(self):
        self.runner = CliRunner()
        self.tempdir = tempfile.mkdtemp()

    def tearDown(self):
        if os.path.exists(self.tempdir) and 'tmp' in self.tempdir:
            shutil.rmtree(self.tempdir)
            self.tempdir = None

    def invoke(self, *args):
        result = self.runner.invoke(cli.cli, list(args))
        logger.debug('ordcalc %s -> %d\n%s', ' '.join(args), result.exit_code, result.output)
        return result

    def write(self, name, document):
        path = os.path.join(self.tempdir, name)
        with open(path, 'w', encoding='utf-8') as handle:
            if isinstance(document, str):
                handle.write(document)
            else:
                json.dump(document, handle)
        return path

    def test_theta_cmp(self):
        result = self.invoke('theta', 'cmp', '0', '(v 0)')
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.output.strip(), 'LT')

    def test_theta_cmp_json(self):
        result = self.invoke('--format', 'json', 'theta', 'cmp', '(v 0)', '0')
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(json.loads(result.output), {'order': 'GT'})

    def test_theta_malformed(self):
        result = self.invoke('theta', 'cmp', '(v', '0')
        self.assertEqual(result.exit_code, 2)

    def test_theta_enum(self):
        result = self.invoke('--format', 'json', 'theta', 'enum', '--size', '2')
        self.assertEqual(result.exit_code, 0)
        document = json.loads(result.output)
        self.assertEqual(document['count'], len(document['terms']))
        self.assertIn('0', document['terms'])

    def test_bad_size(self):
        result = self.invoke('theta', 'enum', '--size', '0')
        self.assertEqual(result.exit_code, 2)

    def test_psi_cmp(self):
        result = self.invoke('psi', 'cmp', '(p 0)', 'Om')
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.output.strip(), 'LT')

    def test_psi_nf(self):
        self.assertEqual(self.invoke('psi', 'nf', '(p Om)').exit_code, 0)
        result = self.invoke('psi', 'nf', '(p (p Om))')
        self.assertEqual(result.exit_code, 1)
        self.assertEqual(result.output.strip(), 'false')

    def test_psi_hmember(self):
        self.assertEqual(self.invoke('psi', 'hmember', '(p 0)', '(p 0)').exit_code, 0)
        self.assertEqual(self.invoke('psi', 'hmember', '0', '(p 0)').exit_code, 1)
        self.assertEqual(self.invoke('psi', 'hmember', '0', '(p 0)', '(p 0)').exit_code, 0)
        self.assertEqual(self.invoke('psi', 'hmember', '0').exit_code, 2)

    def test_psi_collapse(self):
        result = self.invoke('psi', 'collapse', '--gamma', '0', '--a0', '0', '--m', '2')
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.output.splitlines(), ['b_2 = Om+Om', 'beta_2 = p(Om+Om)'])
        self.assertEqual(self.invoke('psi', 'collapse', '--gamma', '0', '--a0', '0', '--m', '0').exit_code, 2)

    def test_check_accept(self):
        result = self.invoke('check', '--jobs', '1', os.path.join(PROOFS, 'r_accept.json'))
        self.assertEqual(result.exit_code, 0)
        self.assertIn('accepted', result.output)

    def test_check_reject(self):
        result = self.invoke('check', '--jobs', '1', os.path.join(PROOFS, 'logical_reject.json'))
        self.assertEqual(result.exit_code, 1)
        self.assertIn('rejected', result.output)

    def test_check_several(self):
        paths = [os.path.join(PROOFS, name) for name in ('r_accept.json', 'logical_accept.json')]
        result = self.invoke('--format', 'json', 'check', '--jobs', '1', *paths)
        self.assertEqual(result.exit_code, 0)
        self.assertEqual([report['accepted'] for report in json.loads(result.output)], [True, True])

    def test_check_malformed(self):
        path = self.write('broken.json', '{"theory": ')
        result = self.invoke('check', '--jobs', '1', path)
        self.assertEqual(result.exit_code, 2)

    def test_check_bad_theory(self):
        result = self.invoke('check', '--jobs', '1', '--theory', 'nonsense', os.path.join(PROOFS, 'r_accept.json'))
        self.assertEqual(result.exit_code, 2)

    def test_lfp(self):
        path = self.write('operators.json', {'operators': [ACC_OPERATOR]})
        result = self.invoke('lfp', 'trace', path, '--n', '3')
        self.assertEqual(result.exit_code, 0)
        self.assertIn('closure index: 3', result.output)
        result = self.invoke('lfp', 'norm', path, '--elem', '2', '--n', '3')
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.output.strip(), '2')
        self.assertEqual(self.invoke('lfp', 'axioms', path, '--n', '3').exit_code, 0)

    def test_lfp_unknown_operator(self):
        path = self.write('operators.json', {'operators': [ACC_OPERATOR]})
        self.assertEqual(self.invoke('lfp', 'trace', path, '--n', '3', '--op', 'missing').exit_code, 2)

    def test_acc(self):
        path = self.write('relation.json', {'size': 3, 'edges': [[0, 1], [1, 2], [0, 2]]})
        result = self.invoke('acc', path)
        self.assertEqual(result.exit_code, 0)
        self.assertIn('accessible: [0, 1, 2]', result.output)
        self.assertIn('rank(0) = 0', result.output)

    def test_resolve_build_and_check(self):
        path = os.path.join(self.tempdir, 'refutation.json')
        result = self.invoke('resolve', 'build', '--n', '2', '--output', path)
        self.assertEqual(result.exit_code, 0)
        self.assertIn('max_decoration: 4', result.output)
        self.assertIn('max_decoration_index: 5', result.output)
        self.assertIn('leaves: 13', result.output)
        self.assertEqual(self.invoke('resolve', 'check', path).exit_code, 0)

    def test_resolve_build_help(self):
        result = self.invoke('resolve', 'build', '--help')
        self.assertEqual(result.exit_code, 0)
        text = ' '.join(result.output.split())
        self.assertIn('max_decoration_index is the largest leaf stage', text)
        self.assertIn('minimal raise gives 4 and 5', text)

    def test_resolve_check_reject(self):
        path = self.write('forged.json', {'nodes': [{'conclusion': ['C0^1', '-D0^1'], 'leaf': 'unit'}], 'root': 0})
        result = self.invoke('resolve', 'check', path)
        self.assertEqual(result.exit_code, 1)
        self.assertIn('leaf-order', result.output)

    def test_resolve_brute(self):
        result = self.invoke('resolve', 'brute', '--n', '1', '--max-dec', '2')
        self.assertEqual(result.exit_code, 0)
        self.assertIn('refutation found', result.output)
        result = self.invoke('resolve', 'brute', '--n', '1', '--max-dec', '1')
        self.assertIn('no refutation', result.output)

    def test_resolve_growth(self):
        result = self.invoke('resolve', 'growth', '--upto', '2')
        self.assertEqual(result.exit_code, 0)
        self.assertEqual(result.output.splitlines()[1:], ['1\t3\t2\t3', '2\t13\t4\t5'])

    def test_resolve_certify(self):
        result = self.invoke('resolve', 'certify', '--n', '2', '--a0', '0')
        self.assertEqual(result.exit_code, 0)
        self.assertIn('final bound: p(Om+Om+Om+Om+Om)+p(0)', result.output)
        self.assertEqual(self.invoke('resolve', 'certify', '--n', '2').exit_code, 0)
        self.assertEqual(self.invoke('resolve', 'certify', '--n', '2', '--a0', '(p (p Om))').exit_code, 2)

    def test_sweep(self):
        result = self.invoke('sweep', 'theta', '--size', '3', '--samples', '10')
        self.assertEqual(result.exit_code, 0)

    def test_debug(self):
        result = self.invoke('debug')
        self.assertEqual(result.exit_code, 0)
        self.assertIn('Ordcalc debug information:', result.output)

    def test_run(self):
        self.assertEqual(cli.run(['theta', 'cmp', '0', '(v 0)']), 0)
        self.assertEqual(cli.run(['psi', 'nf', '(p (p Om))']), 1)
        self.assertEqual(cli.run(['theta', 'cmp', '0']), 2)


if __name__ == '__main__':
    logging.basicConfig(level=logging.DEBUG)
    test_suite = unittest.TestLoader().loadTestsFromTestCase(TestCommandLine)
    unittest.TextTestRunner(verbosity=2).run(test_suite)
