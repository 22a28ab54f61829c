from fractions import Fraction

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from qpresheaf import errors
from qpresheaf.classical_prob import cdf, quantile
from qpresheaf.linop_core import HermitianOperator, Projection, eig_hermitian, proj_join
from qpresheaf.order_core import NEG_INF, POS_INF, ExtendedReal, verify_galois_pair
from qpresheaf.quantum_prob import (
    DensityState,
    ProjectionMeasure,
    expectation,
    expectation_from_cdf,
    gelfand_shadow,
    kappa_rho,
    mu_rho,
    pairing,
    quantum_cdf,
    quantum_cdf_map,
    quantum_quantile,
    quantum_quantile_global,
    quantum_quantile_map,
    real_rank_one_sample,
)
from qpresheaf.sampling import make_rng, random_hermitian, random_state
from qpresheaf.spectral import BorelSet, q_observable
from tests import base

A = HermitianOperator.diag([1, 3])
RHO = DensityState(np.diag([0.7, 0.3]))
E1 = Projection.diag([1, 0])
E2 = Projection.diag([0, 1])


class TestDensityState(base.TestCase):
    def test_rejects_wrong_trace(self):
        with self.assertRaisesRegex(errors.NotAState, 'trace'):
            DensityState(np.diag([0.5, 0.4]))

    def test_rejects_negative(self):
        with self.assertRaises(errors.NotAState) as context:
            DensityState(np.diag([1.5, -0.5]))
        self.assertEqual('positive', context.exception.invariant)

    def test_pure(self):
        rho = DensityState.pure([1, 1])
        self.assertAlmostEqual(1.0, mu_rho(rho, Projection.onto([1, 1])))
        with self.assertRaises(errors.NotAState):
            DensityState.pure([0, 0])

    def test_maximally_mixed(self):
        self.assertAlmostEqual(0.5, mu_rho(DensityState.maximally_mixed(2), E1))


class TestProjectionMeasure(base.TestCase):
    def test_values(self):
        self.assertAlmostEqual(0.7, mu_rho(RHO, E1))
        self.assertAlmostEqual(1.0, mu_rho(RHO, Projection.identity(2)))
        self.assertEqual(0.0, mu_rho(RHO, Projection.zero(2)))

    def test_dim_mismatch(self):
        with self.assertRaises(errors.DimMismatch):
            mu_rho(RHO, Projection.identity(3))

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_finite_additivity(self, seed):
        rng = make_rng(seed)
        rho = random_state(rng, 3)
        projections = eig_hermitian(random_hermitian(rng, 3)).eigenprojections
        p, q = projections[0], projections[1]
        self.assertAlmostEqual(mu_rho(rho, p) + mu_rho(rho, q), mu_rho(rho, proj_join(p, q)))
        measure = ProjectionMeasure(rho)
        self.assertAlmostEqual(1.0, sum(measure(e) for e in projections))


class TestQuantumCDF(base.TestCase):
    def test_values(self):
        self.assertEqual(0.0, quantum_cdf(RHO, A, NEG_INF))
        self.assertEqual(0.0, quantum_cdf(RHO, A, 0))
        self.assertAlmostEqual(0.7, quantum_cdf(RHO, A, 1))
        self.assertAlmostEqual(0.7, quantum_cdf(RHO, A, 2))
        self.assertAlmostEqual(1.0, quantum_cdf(RHO, A, 3))
        self.assertAlmostEqual(1.0, quantum_cdf(RHO, A, POS_INF))

    def test_quantile_values(self):
        self.assertEqual(NEG_INF, quantum_quantile(RHO, A, 0))
        self.assertEqual(ExtendedReal.finite(1), quantum_quantile(RHO, A, Fraction(1, 2)))
        self.assertEqual(ExtendedReal.finite(1), quantum_quantile(RHO, A, Fraction(7, 10)))
        self.assertEqual(ExtendedReal.finite(3), quantum_quantile(RHO, A, Fraction(71, 100)))
        self.assertEqual(ExtendedReal.finite(3), quantum_quantile(RHO, A, 1))

    def test_quantile_range(self):
        with self.assertRaises(errors.OutOfRange):
            quantum_quantile(RHO, A, -0.1)
        with self.assertRaises(errors.OutOfRange):
            quantum_quantile(RHO, A, float('nan'))

    def test_galois(self):
        grid = [Fraction(k, 20) for k in range(21)]
        report = verify_galois_pair(quantum_quantile_map(RHO, A, grid), quantum_cdf_map(RHO, A))
        self.assertTrue(report.passed)

    def test_quantile_through_kappa(self):
        for k in range(11):
            s = Fraction(k, 10)
            self.assertEqual(quantum_quantile(RHO, A, s), q_observable(A, kappa_rho(RHO, A, s)))

    def test_kappa_chain(self):
        self.assertEqual(Projection.zero(2), kappa_rho(RHO, A, 0))
        self.assertEqual(E1, kappa_rho(RHO, A, Fraction(1, 2)))
        self.assertEqual(Projection.identity(2), kappa_rho(RHO, A, Fraction(9, 10)))

    def test_kappa_unknown_mode(self):
        with self.assertRaises(ValueError):
            kappa_rho(RHO, A, Fraction(1, 2), 'local')

    def test_global_meet_disagrees(self):
        # both eigenprojections of diag(0, 1) carry weight 1/2 under the maximally mixed state
        rho = DensityState.maximally_mixed(2)
        a = HermitianOperator.diag([0, 1])
        self.assertEqual(ExtendedReal.finite(0), quantum_quantile(rho, a, Fraction(1, 2)))
        self.assertEqual(Projection.zero(2), kappa_rho(rho, a, Fraction(1, 2), 'global'))
        self.assertEqual(NEG_INF, quantum_quantile_global(rho, a, Fraction(1, 2)))

    def test_real_rank_one_sample(self):
        sample = real_rank_one_sample(4)
        self.assertEqual(5, len(sample))
        self.assertEqual(Projection.identity(2), sample[-1])
        with self.assertRaises(ValueError):
            real_rank_one_sample(0)

    def test_pairing(self):
        self.assertAlmostEqual(0.7, pairing(RHO, A, BorelSet.points(1)))
        self.assertAlmostEqual(0.3, pairing(RHO, A, BorelSet.interval(2, 5)))
        self.assertEqual(0.0, pairing(RHO, A, BorelSet.empty()))

    def test_expectation(self):
        self.assertAlmostEqual(1.6, expectation(RHO, A))
        self.assertAlmostEqual(1.6, expectation_from_cdf(RHO, A))

    @given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=2, max_value=5))
    def test_random_states(self, seed, dim):
        rng = make_rng(seed)
        rho, a = random_state(rng, dim), random_hermitian(rng, dim, degenerate=seed % 2 == 1)
        grid = [Fraction(k, 10) for k in range(11)]
        self.assertTrue(verify_galois_pair(quantum_quantile_map(rho, a, grid), quantum_cdf_map(rho, a)).passed)
        self.assertAlmostEqual(expectation(rho, a), expectation_from_cdf(rho, a))


class TestGelfandShadow(base.TestCase):
    def test_shadow_matches_quantum_cdf(self):
        fixture = gelfand_shadow(RHO, A)
        self.assertEqual(2, len(fixture.space))
        for r in (0, 1, 2, 3):
            self.assertAlmostEqual(quantum_cdf(RHO, A, r), float(cdf(fixture.variable, fixture.measure, r)))
        self.assertEqual(ExtendedReal.finite(3), quantile(fixture.variable, fixture.measure, Fraction(4, 5)))
