from fractions import Fraction

from hypothesis import given
from hypothesis import strategies as st

from qpresheaf import errors
from qpresheaf.classical_prob import (
    EventLattice,
    FiniteSampleSpace,
    Fixture,
    ProbabilityMeasure,
    cdf,
    cdf_map,
    kappa_chain,
    kappa_global,
    lcdf,
    lcdf_of,
    lquantile,
    measure_map,
    quantile,
    quantile_map,
    random_fixture,
    unit_grid,
)
from qpresheaf.order_core import NEG_INF, POS_INF, ExtendedReal, check_preservation, verify_galois_pair
from qpresheaf.sampling import make_rng
from tests import base


def abc():
    return Fixture.build('abc', ['a', 'b', 'c'], ['0.2', '0.3', '0.5'], [1, 1, 4])


class TestFixture(base.TestCase):
    def test_weights_are_exact(self):
        fixture = abc()
        self.assertTrue(fixture.measure.exact)
        self.assertEqual(Fraction(1, 2), fixture.measure({'a', 'b'}))
        self.assertEqual(1, fixture.measure(fixture.space.whole))

    def test_rejects_unnormalized(self):
        with self.assertRaises(errors.OutOfRange):
            Fixture.build('bad', ['a', 'b'], ['0.5', '0.6'], [0, 1])

    def test_rejects_negative(self):
        with self.assertRaisesRegex(errors.OutOfRange, 'non-negative'):
            Fixture.build('bad', ['a', 'b'], ['-0.5', '1.5'], [0, 1])

    def test_rejects_ragged(self):
        with self.assertRaises(ValueError):
            Fixture.build('bad', ['a', 'b'], ['1'], [0, 1])

    def test_rejects_duplicate_points(self):
        with self.assertRaises(ValueError):
            FiniteSampleSpace(('a', 'a'))

    def test_dirac(self):
        space = FiniteSampleSpace(('a', 'b'))
        self.assertEqual(1, ProbabilityMeasure.dirac(space, 'b')({'b'}))

    def test_equivalence_modulo_null_sets(self):
        fixture = Fixture.build('null', ['a', 'b'], ['1', '0'], [0, 1])
        self.assertTrue(fixture.measure.equivalent(frozenset('a'), frozenset('ab')))
        self.assertFalse(fixture.measure.equivalent(frozenset(), frozenset('a')))

    def test_random_fixture_is_seeded(self):
        first = random_fixture(make_rng(1), 5)
        second = random_fixture(make_rng(1), 5)
        self.assertEqual(first.variable, second.variable)
        self.assertEqual(first.measure, second.measure)
        self.assertEqual(1, sum(first.measure.weights.values()))


class TestEvents(base.TestCase):
    def test_lattice(self):
        lattice = EventLattice(FiniteSampleSpace(('a', 'b', 'c')))
        self.assertEqual(8, len(list(lattice.events())))
        self.assertEqual(frozenset('c'), lattice.complement(frozenset('ab')))
        self.assertEqual(frozenset('a'), lattice.meet([frozenset('ab'), frozenset('ac')]))
        self.assertEqual(frozenset(), lattice.join([]))
        self.assertEqual(lattice.top, lattice.meet([]))


class TestCDF(base.TestCase):
    def test_lcdf(self):
        fixture = abc()
        self.assertEqual(frozenset(), lcdf(fixture.variable, NEG_INF))
        self.assertEqual(frozenset(), lcdf(fixture.variable, Fraction(1, 2)))
        self.assertEqual(frozenset('ab'), lcdf(fixture.variable, 1))
        self.assertEqual(frozenset('ab'), lcdf(fixture.variable, 3))
        self.assertEqual(frozenset('abc'), lcdf(fixture.variable, 4))
        self.assertEqual(frozenset('abc'), lcdf(fixture.variable, POS_INF))

    def test_lquantile_is_largest_value(self):
        fixture = abc()
        self.assertEqual(NEG_INF, lquantile(fixture.variable, frozenset()))
        self.assertEqual(ExtendedReal.finite(1), lquantile(fixture.variable, frozenset('a')))
        self.assertEqual(ExtendedReal.finite(4), lquantile(fixture.variable, frozenset('ac')))

    def test_lcdf_galois(self):
        fixture = abc()
        lcdf_fn = lcdf_of(fixture.variable)
        for event in EventLattice(fixture.space).events():
            self.assertEqual(lquantile(fixture.variable, event), lcdf_fn.quantile(event))

    def test_cdf_values(self):
        fixture = abc()
        self.assertEqual(0, cdf(fixture.variable, fixture.measure, NEG_INF))
        self.assertEqual(Fraction(1, 2), cdf(fixture.variable, fixture.measure, 1))
        self.assertEqual(Fraction(1, 2), cdf(fixture.variable, fixture.measure, Fraction(7, 2)))
        self.assertEqual(1, cdf(fixture.variable, fixture.measure, 4))

    def test_quantile_values(self):
        fixture = abc()
        a, mu = fixture.variable, fixture.measure
        self.assertEqual(NEG_INF, quantile(a, mu, 0))
        self.assertEqual(ExtendedReal.finite(1), quantile(a, mu, Fraction(1, 10)))
        self.assertEqual(ExtendedReal.finite(1), quantile(a, mu, Fraction(1, 2)))
        self.assertEqual(ExtendedReal.finite(4), quantile(a, mu, Fraction(51, 100)))
        self.assertEqual(ExtendedReal.finite(4), quantile(a, mu, 1))

    def test_quantile_rejects_out_of_range(self):
        fixture = abc()
        with self.assertRaises(errors.OutOfRange):
            quantile(fixture.variable, fixture.measure, Fraction(3, 2))

    def test_domain_mismatch(self):
        other = Fixture.build('other', ['x'], ['1'], [0])
        with self.assertRaises(errors.DomainMismatch):
            cdf(abc().variable, other.measure, 0)

    def test_cdf_quantile_galois(self):
        fixture = abc()
        report = verify_galois_pair(quantile_map(fixture.variable, fixture.measure), cdf_map(fixture.variable, fixture.measure))
        self.assertTrue(report.passed)

    def test_cdf_preserves_meets(self):
        fixture = abc()
        self.assertTrue(check_preservation(cdf_map(fixture.variable, fixture.measure), 'meets'))

    def test_quantile_factors_through_chain(self):
        fixture = abc()
        a, mu = fixture.variable, fixture.measure
        for p in unit_grid(20):
            self.assertEqual(quantile(a, mu, p), lquantile(a, kappa_chain(a, mu, p)))

    def test_global_meet_is_not_an_adjoint(self):
        # at s = 1/2 the events {a, b} and {c} both carry enough weight, and they are disjoint
        fixture = abc()
        self.assertEqual(frozenset('ab'), kappa_chain(fixture.variable, fixture.measure, Fraction(1, 2)))
        self.assertEqual(frozenset(), kappa_global(fixture.measure, Fraction(1, 2)))
        self.assertFalse(check_preservation(measure_map(fixture.measure), 'meets'))

    @given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=1, max_value=6))
    def test_random_fixtures(self, seed, size):
        fixture = random_fixture(make_rng(seed), size)
        a, mu = fixture.variable, fixture.measure
        self.assertTrue(verify_galois_pair(quantile_map(a, mu, unit_grid(20)), cdf_map(a, mu)).passed)
        for p in unit_grid(10):
            self.assertEqual(quantile(a, mu, p), lquantile(a, kappa_chain(a, mu, p)))
            self.assertIn(quantile(a, mu, p), (NEG_INF, *a.breakpoints))
