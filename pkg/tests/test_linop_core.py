import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from qpresheaf import errors
from qpresheaf.linop_core import (
    HermitianOperator,
    Projection,
    ProjectionLattice,
    commutator_norm,
    eig_hermitian,
    join_all,
    meet_all,
    orthocomplement,
    proj_eq,
    proj_join,
    proj_leq,
    proj_meet,
    support_projection,
)
from qpresheaf.sampling import make_rng, random_hermitian, random_projection, random_unitary
from tests import base

PLUS = Projection(np.full((2, 2), 0.5))
E1 = Projection.diag([1, 0])
E2 = Projection.diag([0, 1])


class TestOperators(base.TestCase):
    def test_rejects_non_hermitian(self):
        with self.assertRaises(errors.NotHermitian):
            HermitianOperator([[0, 1], [0, 0]])

    def test_rejects_non_square(self):
        with self.assertRaisesRegex(errors.NotHermitian, 'square'):
            HermitianOperator([[1, 0, 0], [0, 1, 0]])

    def test_rejects_non_finite(self):
        with self.assertRaises(errors.NotHermitian):
            HermitianOperator([[float('nan'), 0], [0, 1]])

    def test_rejects_non_idempotent(self):
        with self.assertRaises(errors.NotAProjection):
            Projection(np.diag([0.5, 1.0]))

    def test_matrix_is_read_only(self):
        a = HermitianOperator.diag([1, 2])
        with self.assertRaises(ValueError):
            a.matrix[0, 0] = 5

    def test_arithmetic(self):
        a = HermitianOperator.diag([1, 2])
        b = HermitianOperator.diag([3, -1])
        self.assertEqual(HermitianOperator.diag([4, 1]), a + b)
        self.assertEqual(HermitianOperator.diag([-2, 3]), a - b)
        self.assertEqual(HermitianOperator.diag([2, 4]), 2 * a)

    def test_dim_mismatch(self):
        with self.assertRaises(errors.DimMismatch):
            HermitianOperator.identity(2) + HermitianOperator.identity(3)

    def test_rank(self):
        self.assertEqual(1, PLUS.rank)
        self.assertEqual(0, Projection.zero(3).rank)
        self.assertEqual(2, Projection.onto([[1, 0, 0], [1, 1, 0]]).rank)


class TestEigendecomposition(base.TestCase):
    def test_degenerate_spectrum_clusters(self):
        decomposition = eig_hermitian(HermitianOperator.diag([2, 1, 2]))
        self.assertEqual((1.0, 2.0), decomposition.eigenvalues)
        self.assertEqual((1, 2), decomposition.multiplicities)
        self.assertEqual(Projection.diag([1, 0, 1]), decomposition.eigenprojections[1])

    def test_reconstruction(self):
        rng = make_rng(7)
        for dim in range(1, 7):
            a = random_hermitian(rng, dim, degenerate=dim % 2 == 0)
            self.assertEqual(a, eig_hermitian(a).reconstruct())

    def test_eigenprojections_are_orthogonal(self):
        a = random_hermitian(make_rng(3), 5)
        projections = eig_hermitian(a).eigenprojections
        total = sum(p.matrix for p in projections)
        np.testing.assert_allclose(np.eye(5), total, atol=1e-9)
        for i, p in enumerate(projections):
            for q in projections[i + 1 :]:
                np.testing.assert_allclose(0, p.matrix @ q.matrix, atol=1e-9)

    def test_deterministic(self):
        a = random_hermitian(make_rng(11), 4)
        self.assertIs(eig_hermitian(a), eig_hermitian(HermitianOperator(a.matrix)))

    def test_dimension_limit(self):
        with self.assertRaises(ValueError):
            eig_hermitian(HermitianOperator.identity(65))


class TestProjectionLattice(base.TestCase):
    def test_order(self):
        self.assertTrue(proj_leq(E1, Projection.identity(2)))
        self.assertTrue(proj_leq(Projection.zero(2), PLUS))
        self.assertFalse(proj_leq(E1, PLUS))

    def test_meet_of_lines_is_zero(self):
        self.assertEqual(Projection.zero(2), proj_meet(E1, PLUS))

    def test_join_of_lines_is_identity(self):
        self.assertEqual(Projection.identity(2), proj_join(E1, PLUS))

    def test_non_distributive(self):
        # E1 & (E2 v PLUS) = E1, but (E1 & E2) v (E1 & PLUS) = 0
        left = proj_meet(E1, proj_join(E2, PLUS))
        right = proj_join(proj_meet(E1, E2), proj_meet(E1, PLUS))
        self.assertEqual(E1, left)
        self.assertEqual(Projection.zero(2), right)

    def test_orthomodular(self):
        p = Projection.onto([1, 0, 0])
        q = Projection.onto([[1, 0, 0], [0, 1, 1]])
        self.assertEqual(q, proj_join(p, proj_meet(orthocomplement(p), q)))

    def test_rounding_noise_is_not_rank(self):
        zero = Projection.zero(2)
        for seed in range(20):
            u = random_unitary(make_rng(seed), 2)
            noisy_identity = Projection(u @ u.conj().T)
            with self.subTest(seed=seed):
                join = proj_join(noisy_identity, zero)
                self.assertEqual(Projection.identity(2), proj_meet(noisy_identity, join))
                self.assertEqual(Projection.identity(2), proj_meet(noisy_identity, noisy_identity))
                self.assertEqual(Projection.zero(2), proj_join(zero, zero))
                self.assertEqual(noisy_identity, proj_join(noisy_identity, proj_meet(noisy_identity, zero)))

    def test_empty_meet_and_join(self):
        self.assertEqual(Projection.identity(3), meet_all([], 3))
        self.assertEqual(Projection.zero(3), join_all([], 3))

    def test_lattice_object(self):
        lattice = ProjectionLattice(2)
        self.assertEqual(Projection.identity(2), lattice.top)
        self.assertEqual(Projection.zero(2), lattice.bottom)
        self.assertEqual(Projection.zero(2), lattice.meet([E1, E2]))
        self.assertEqual(lattice, ProjectionLattice(2))
        self.assertNotEqual(lattice, ProjectionLattice(3))

    def test_support_projection(self):
        self.assertEqual(E1, support_projection(HermitianOperator.diag([3, 0])))
        self.assertEqual(Projection.zero(2), support_projection(HermitianOperator.diag([0, 0])))

    def test_commutator(self):
        self.assertEqual(0.0, commutator_norm(E1, E2))
        self.assertGreater(commutator_norm(E1, PLUS), 0.1)

    @given(st.integers(min_value=0, max_value=2**32 - 1), st.integers(min_value=2, max_value=4))
    def test_lattice_laws(self, seed, dim):
        rng = make_rng(seed)
        p, q, r = (random_projection(rng, dim) for _ in range(3))
        meet, join = proj_meet(p, q), proj_join(p, q)
        self.assertTrue(proj_leq(meet, p) and proj_leq(meet, q))
        self.assertTrue(proj_leq(p, join) and proj_leq(q, join))
        self.assertTrue(proj_eq(p, proj_meet(p, proj_join(p, q)), 1e-7))
        self.assertTrue(proj_eq(p, proj_join(p, proj_meet(p, q)), 1e-7))
        if proj_leq(r, p, 1e-7) and proj_leq(r, q, 1e-7):
            self.assertTrue(proj_leq(r, meet, 1e-7))
