from unittest import mock

from qpresheaf import errors
from qpresheaf.cli.scenario import bundled_fixture, parse_scenario
from qpresheaf.cli.suites import MAPS_PER_OPERATOR, SuiteResult, classical_suite, quantum_suite, run_suites
from qpresheaf.order_core import POS_INF
from qpresheaf.presheaf import heyting_neg, heyting_witness
from qpresheaf.sampling import make_rng
from qpresheaf.spectral import rescale_check
from tests import base


class TestSuiteResult(base.TestCase):
    def test_check_counts_and_records(self):
        result = SuiteResult('demo')
        self.assertTrue(result.check('order_core', 'monotone', True))
        self.assertFalse(result.check('order_core', 'monotone', False, r=POS_INF, events=frozenset('ba')))
        self.assertEqual(2, result.checked)
        self.assertFalse(result.passed)
        [violation] = result.violations
        expected = {'module': 'order_core', 'law': 'monotone', 'inputs': {'r': 'inf', 'events': ['a', 'b']}}
        self.assertEqual(expected, violation.as_dict())

    def test_guard_turns_errors_into_violations(self):
        result = SuiteResult('demo')
        with result.guard('quantum_prob', 'unit-interval', s=2):
            raise errors.OutOfRange('level 2 is outside [0, 1]')
        self.assertEqual(1, result.checked)
        self.assertEqual('OutOfRange: level 2 is outside [0, 1]', result.violations[0].inputs['error'])

    def test_guard_passes_other_exceptions(self):
        result = SuiteResult('demo')
        with self.assertRaises(KeyError), result.guard('quantum_prob', 'unit-interval'):
            raise KeyError('s')

    def test_notes_are_unique(self):
        result = SuiteResult('demo')
        result.note('skipped')
        result.note('skipped')
        self.assertEqual({'checked': 0, 'violations': [], 'notes': ['skipped']}, result.as_dict())


class TestSuites(base.TestCase):
    def test_heyting_witness(self):
        poset, s = heyting_witness()
        self.assertEqual(('Vd', 'Vc'), poset.labels)
        self.assertTrue(heyting_neg(s).is_empty)
        self.assertFalse(s.is_top)

    def test_classical_without_scenario(self):
        self.assertEqual(0, classical_suite(None, make_rng(0), 0).checked)
        result = classical_suite(None, make_rng(0), 3)
        self.assertTrue(result.passed)
        self.assertGreater(result.checked, 0)

    def test_unknown_suite(self):
        with self.assertRaises(ValueError):
            run_suites(None, 'geometric')

    def test_suites_draw_independent_streams(self):
        alone = run_suites(None, 'classical', seed=5, random_count=3)
        together = run_suites(None, 'all', seed=5, random_count=3)
        self.assertEqual(alone['suites']['classical'], together['suites']['classical'])
        self.assertIsNone(together['scenario'])
        self.assertTrue(together['passed'])

    def test_twenty_maps_per_operator(self):
        scenario = parse_scenario({'dim': 2, 'operators': {'A': [[1, 0], [0, 3]]}})
        with mock.patch('qpresheaf.cli.suites.rescale_check', wraps=rescale_check) as wrapped:
            result = quantum_suite(scenario, make_rng(0), 0)
        self.assertEqual(20, MAPS_PER_OPERATOR)
        self.assertEqual(MAPS_PER_OPERATOR, wrapped.call_count)
        self.assertTrue(result.passed)


class TestBundledFixture(base.TestCase):
    def test_all_suites_pass(self):
        report = run_suites(bundled_fixture(), 'all', seed=42, random_count=6)
        for name, suite in report['suites'].items():
            with self.subTest(suite=name):
                self.assertEqual([], suite['violations'])
                self.assertGreater(suite['checked'], 0)
        self.assertTrue(report['passed'])
