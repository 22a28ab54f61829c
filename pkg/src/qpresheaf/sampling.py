"""Seeded random instances for the law-check suites.

Everything draws from a :class:`numpy.random.Generator`, so a single seed
reproduces a whole suite run.
"""

from __future__ import annotations

import numpy as np

from qpresheaf.contexts import Context, ContextPoset, coarsenings, context_of_operator, maximal_context, poset_build
from qpresheaf.linop_core import HermitianOperator, Projection, eig_hermitian
from qpresheaf.quantum_prob import DensityState
from qpresheaf.spectral import BorelSet, PiecewiseLinearMap


def make_rng(seed: int | np.random.SeedSequence) -> np.random.Generator:
    return np.random.default_rng(seed)


def spawn_rngs(seed: int, count: int) -> list[np.random.Generator]:
    """``count`` independent generators, one per child of ``SeedSequence(seed)``."""
    return [make_rng(child) for child in np.random.SeedSequence(seed).spawn(count)]


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a complex Ginibre matrix."""
    ginibre = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(ginibre)
    phases = np.diag(r) / np.abs(np.diag(r))
    return q * phases


def random_hermitian(rng: np.random.Generator, dim: int, degenerate: bool = False) -> HermitianOperator:
    """A random Hermitian operator; ``degenerate`` draws small integer eigenvalues so that some repeat."""
    if degenerate:
        values = rng.integers(-2, 3, size=dim).astype(float)
        u = random_unitary(rng, dim)
        return HermitianOperator(u @ np.diag(values) @ u.conj().T)
    ginibre = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return HermitianOperator((ginibre + ginibre.conj().T) / 2)


def random_projection(rng: np.random.Generator, dim: int, rank: int | None = None) -> Projection:
    if rank is None:
        rank = int(rng.integers(0, dim + 1))
    if rank == 0:
        return Projection.zero(dim)
    vectors = rng.standard_normal((rank, dim)) + 1j * rng.standard_normal((rank, dim))
    return Projection.onto(vectors)


def random_state(rng: np.random.Generator, dim: int) -> DensityState:
    """A full-rank random density matrix ``G G* / tr(G G*)``."""
    ginibre = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    wishart = ginibre @ ginibre.conj().T
    return DensityState(wishart / np.trace(wishart).real)


def random_commuting_pair(rng: np.random.Generator, dim: int) -> tuple[HermitianOperator, HermitianOperator]:
    """Two operators diagonal in one random basis."""
    u = random_unitary(rng, dim)
    first = rng.integers(-3, 4, size=dim).astype(float)
    second = rng.integers(-3, 4, size=dim).astype(float)
    return (
        HermitianOperator(u @ np.diag(first) @ u.conj().T),
        HermitianOperator(u @ np.diag(second) @ u.conj().T),
    )


def random_monotone_map(rng: np.random.Generator, low: float = -5.0, high: float = 5.0, knots: int = 4) -> PiecewiseLinearMap:
    xs = np.sort(rng.uniform(low, high, size=knots))
    ys = np.cumsum(rng.uniform(0.0, 2.0, size=knots)) + rng.uniform(-3.0, 3.0)
    return PiecewiseLinearMap(tuple((float(x), float(y)) for x, y in zip(xs, ys)))


def random_borel_set(rng: np.random.Generator, operator: HermitianOperator) -> BorelSet:
    """A union of a random subset of eigenvalue points and a random interval."""
    values = np.linalg.eigvalsh(operator.matrix)
    chosen = [float(v) for v in values if rng.random() < 0.5]
    lo, hi = np.sort(rng.uniform(float(values[0]) - 1, float(values[-1]) + 1, size=2))
    return BorelSet.points(*chosen) | BorelSet.interval(float(lo), float(hi))


def random_basis_context(rng: np.random.Generator, dim: int, label: str = '') -> Context:
    return maximal_context(random_unitary(rng, dim), label)


def random_poset(rng: np.random.Generator, operator: HermitianOperator, extra: int = 1) -> ContextPoset:
    """Contexts containing ``operator`` plus ``extra`` random maximal contexts.

    Up to dimension four every coarsening of an eigenbasis context of
    ``operator`` is included; above that only the eigenbasis context and ``V_A``.
    """
    _, vectors = np.linalg.eigh(operator.matrix)
    eigenbasis = maximal_context(vectors, 'EA')
    if operator.dim <= 4:
        members = list(coarsenings(eigenbasis))
    else:
        members = [eigenbasis]
        if len(eig_hermitian(operator).eigenvalues) > 1:
            members.append(context_of_operator(operator, 'VA'))
    members.extend(random_basis_context(rng, operator.dim, f'R{i}') for i in range(extra))
    return poset_build(members, 'none')


__all__ = (
    'make_rng',
    'spawn_rngs',
    'random_basis_context',
    'random_borel_set',
    'random_commuting_pair',
    'random_hermitian',
    'random_monotone_map',
    'random_poset',
    'random_projection',
    'random_state',
    'random_unitary',
)
