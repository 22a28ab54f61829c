import contextlib
import io
import json

from qpresheaf.cli import EXIT_INPUT, EXIT_OK, EXIT_VIOLATION, main
from tests import base


class TestCase(base.TestCase):
    def run_main(self, *argv):
        stdout, stderr = io.StringIO(), io.StringIO()
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            code = main(list(argv))
        return code, stdout.getvalue(), stderr.getvalue()

    def run_json(self, *argv):
        code, out, err = self.run_main(*argv, '--output', 'json')
        return code, json.loads(out), err


class TestCheck(TestCase):
    def test_fixture_passes(self):
        code, result, _ = self.run_json('check', '--random-count', '2')
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(result['passed'])
        self.assertEqual({'classical', 'quantum', 'presheaf'}, set(result['suites']))
        self.assertEqual('fixture.json', result['scenario'])
        for suite in result['suites'].values():
            self.assertGreater(suite['checked'], 0)
            self.assertEqual([], suite['violations'])

    def test_text_output(self):
        code, out, _ = self.run_main('check', '--suite', 'classical', '--random-count', '0', '--output', 'text')
        self.assertEqual(EXIT_OK, code)
        self.assertIn('seed=42', out)
        self.assertTrue(out.rstrip().endswith('PASSED'))

    def test_corrupted_table_is_a_violation(self):
        code, result, _ = self.run_json('check', self.path('corrupted_q_table.json'), '--suite', 'quantum', '--random-count', '0')
        self.assertEqual(EXIT_VIOLATION, code)
        self.assertFalse(result['passed'])
        laws = {violation['law'] for violation in result['suites']['quantum']['violations']}
        self.assertIn('galois-adjunction', laws)
        self.assertIn('q-table-agreement', laws)
        for violation in result['suites']['quantum']['violations']:
            self.assertEqual('A_table', violation['inputs']['table'])

    def test_same_seed_same_output(self):
        argv = ('check', '--suite', 'presheaf', '--random-count', '3', '--seed', '7')
        first, second = self.run_main(*argv), self.run_main(*argv)
        self.assertEqual(first[:2], second[:2])

    def test_empty_scenario(self):
        code, result, _ = self.run_json('check', self.path('empty.json'), '--random-count', '1')
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(result['passed'])

    def test_tolerance_from_scenario_and_flag(self):
        argv = ('check', self.path('qutrit.json'), '--suite', 'classical', '--random-count', '0')
        _, result, _ = self.run_json(*argv)
        self.assertEqual(1e-8, result['tolerance'])
        _, result, _ = self.run_json(*argv, '--tol', '1e-6')
        self.assertEqual(1e-6, result['tolerance'])


class TestInputErrors(TestCase):
    def test_non_hermitian(self):
        code, out, err = self.run_main('check', self.path('non_hermitian.json'))
        self.assertEqual(EXIT_INPUT, code)
        self.assertEqual('', out)
        self.assertIn('operators.A', err)
        self.assertIn('[hermitian]', err)

    def test_truncated_json(self):
        code, _, err = self.run_main('report', self.path('truncated.json'))
        self.assertEqual(EXIT_INPUT, code)
        self.assertIn('truncated.json:', err)

    def test_unknown_policy(self):
        code, _, err = self.run_main('report', self.path('bad_policy.json'))
        self.assertEqual(EXIT_INPUT, code)
        self.assertIn('contexts.policy', err)

    def test_counts_must_be_positive_integers(self):
        for name, key in (('bad_grid_steps.json', 'grid_steps'), ('null_samples.json', 'samples')):
            with self.subTest(name=name):
                code, out, err = self.run_main('check', self.path(name))
                self.assertEqual(EXIT_INPUT, code)
                self.assertEqual('', out)
                self.assertIn(key, err)

    def test_missing_file(self):
        code, _, err = self.run_main('check', self.path('no-such-scenario.json'))
        self.assertEqual(EXIT_INPUT, code)
        self.assertIn('cannot read scenario', err)

    def test_bad_arguments(self):
        bad = (
            ['check', '--seed', 'x'],
            ['check', '--tol', '0'],
            ['report', '--table', '3'],
            ['check', '--random-count', '-1'],
            [],
        )
        for argv in bad:
            with self.subTest(argv=argv), self.assertRaises(SystemExit) as context, contextlib.redirect_stderr(io.StringIO()):
                main(argv)
            self.assertEqual(2, context.exception.code)


class TestReport(TestCase):
    def test_table_one(self):
        code, report, _ = self.run_json('report', '--table', '1')
        self.assertEqual(EXIT_OK, code)
        self.assertEqual(1, report['table'])
        rho = report['pairs'][0]
        self.assertEqual(('rho', 'A'), (rho['state'], rho['operator']))
        self.assertEqual(
            [{'r': '-inf', 'value': 0}, {'r': 1, 'value': 0.7}, {'r': 3, 'value': 1}],
            rho['quantum']['cdf'],
        )
        self.assertEqual(1.6, rho['quantum']['expectation'])
        self.assertEqual('-inf', rho['quantum']['quantile'][0]['value'])
        self.assertEqual([1, 3], [step['value'] for step in rho['quantum']['quantile'][1:]])
        [abc] = report['classical']
        self.assertEqual('abc', abc['name'])
        self.assertEqual([0, 0.5, 1], [row['value'] for row in abc['cdf']])
        self.assertEqual({'s': 0.5, 'event': '{a,b}', 'quantile': 1}, abc['kappa'][1])

    def test_table_two(self):
        code, report, _ = self.run_json('report', '--table', '2')
        self.assertEqual(EXIT_OK, code)
        self.assertEqual(['Vz', 'Vx'], report['poset']['contexts'])
        self.assertEqual([], report['poset']['inclusion_edges'])
        column = report['pairs'][0]['presheaf']
        born = column['born']
        self.assertEqual(0.7, born['minimum'])
        self.assertEqual(['Vz'], born['argmin'])
        self.assertEqual(0.7, born['born'])
        self.assertTrue(born['attained'])
        self.assertEqual({'Vz': 0.7, 'Vx': 1}, born['measure'])
        self.assertTrue(column['cdf_agrees'])
        for row in column['quantile']:
            self.assertEqual(row['expected'], row['value'])

    def test_table_two_on_coarsenings(self):
        code, report, _ = self.run_json('report', self.path('qutrit.json'), '--table', '2')
        self.assertEqual(EXIT_OK, code)
        self.assertEqual(4, len(report['poset']['contexts']))
        born = {row['operator']: row['presheaf']['born'] for row in report['pairs']}
        self.assertEqual(0.5, born['A']['minimum'])
        self.assertEqual(0.75, born['B']['minimum'])
        self.assertTrue(born['B']['attained'])

    def test_policy_override(self):
        _, report, _ = self.run_json('report', self.path('qutrit.json'), '--table', '2', '--contexts', 'none')
        self.assertEqual(['Vd'], report['poset']['contexts'])

    def test_empty_scenario_notes(self):
        code, report, _ = self.run_json('report', self.path('empty.json'), '--table', '2')
        self.assertEqual(EXIT_OK, code)
        self.assertIsNone(report['poset'])
        self.assertEqual(1, len(report['notes']))

    def test_text_is_default(self):
        code, out, _ = self.run_main('report')
        self.assertEqual(EXIT_OK, code)
        self.assertTrue(out.startswith('Table 1  scenario=fixture.json  seed=42'))
        self.assertIn('== classical fixture abc ==', out)

    def test_demo(self):
        code, out, _ = self.run_main('demo', '--seed', '3')
        self.assertEqual(EXIT_OK, code)
        self.assertIn('Table 1', out)
        self.assertIn('Table 2', out)
        self.assertIn('inclusions: none', out)
