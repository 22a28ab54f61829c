"""States as probability measures on projections.

A density state ``rho`` gives ``mu_rho(P) = tr(rho P)`` on the projection
lattice. Composed with the spectral family of ``A`` it is the usual CDF of
``A`` in ``rho``; its left adjoint, the quantile function, can be computed
directly or as ``o^A o kappa_rho`` where ``kappa_rho`` is taken along the
spectral chain of ``A``.
"""

from __future__ import annotations

import dataclasses
import logging
import math
from collections.abc import Iterable, Sequence
from fractions import Fraction
from typing import Any, Literal

import numpy as np

from qpresheaf.classical_prob import Fixture
from qpresheaf.config import get_tolerances
from qpresheaf.errors import DimMismatch, NotAState, OutOfRange
from qpresheaf.linop_core import HermitianOperator, Projection, ProjectionLattice, eig_hermitian, meet_all
from qpresheaf.order_core import EXTENDED_REALS, NEG_INF, POS_INF, UNIT_INTERVAL, ExtendedReal, MonotoneMap, Number, as_exact
from qpresheaf.spectral import BorelSet, q_observable, spectral_family_of, spectral_measure

logger = logging.getLogger(__name__)

KappaMode = Literal['chain', 'global']


class DensityState(HermitianOperator):
    """A positive semidefinite Hermitian matrix of unit trace."""

    def __init__(self, entries: Any) -> None:
        super().__init__(entries)
        tol = get_tolerances().state_tol
        lowest = float(np.linalg.eigvalsh(self.matrix)[0])
        if lowest < -tol:
            raise NotAState(f'state is not positive semidefinite (smallest eigenvalue {lowest:.3g})', 'positive')
        trace = float(np.trace(self.matrix).real)
        if abs(trace - 1.0) > tol:
            raise NotAState(f'state has trace {trace:.12g}', 'trace-one')

    @classmethod
    def maximally_mixed(cls, dim: int) -> DensityState:
        return cls(np.eye(dim) / dim)

    @classmethod
    def pure(cls, vector: Sequence[complex]) -> DensityState:
        psi = np.asarray(vector, dtype=np.complex128)
        norm = float(np.linalg.norm(psi))
        if norm == 0:
            raise NotAState('a pure state needs a non-zero vector', 'trace-one')
        psi = psi / norm
        return cls(np.outer(psi, psi.conj()))


def _check_dims(rho: HermitianOperator, other: HermitianOperator) -> None:
    if rho.dim != other.dim:
        raise DimMismatch(f'state of dim {rho.dim} against operator of dim {other.dim}')


def _clamp(value: float) -> float:
    tol = get_tolerances().state_tol
    if -tol <= value < 0:
        return 0.0
    if 1 < value <= 1 + tol:
        return 1.0
    return value


def mu_rho(rho: DensityState, p: Projection) -> float:
    """``tr(rho P)`` clamped to ``[0, 1]``."""
    _check_dims(rho, p)
    return _clamp(float(np.trace(rho.matrix @ p.matrix).real))


@dataclasses.dataclass(frozen=True, eq=False)
class ProjectionMeasure:
    """``mu_rho`` as a finitely additive probability measure on P(N)."""

    state: DensityState

    def __call__(self, p: Projection) -> float:
        return mu_rho(self.state, p)

    def as_map(self, support: Iterable[Projection]) -> MonotoneMap[Projection, float]:
        return MonotoneMap(ProjectionLattice(self.state.dim), UNIT_INTERVAL, self, tuple(support), 'mu_rho', check=False)


def _at_least(value: float, level: Number) -> bool:
    return float(level) <= value + get_tolerances().tol


def _check_level(s: Number, name: str = 's') -> Number:
    if isinstance(s, float) and math.isnan(s):
        raise OutOfRange(f'{name} is NaN')
    if s < 0 or s > 1:
        raise OutOfRange(f'{name} must lie in [0, 1], got {s!r}')
    return s


def quantum_cdf(rho: DensityState, a: HermitianOperator, r: ExtendedReal | Number) -> float:
    """``mu_rho(E^A_r)``."""
    _check_dims(rho, a)
    return mu_rho(rho, spectral_family_of(a)(r))


def _spectral_chain(a: HermitianOperator) -> list[Projection]:
    family = spectral_family_of(a)
    return [Projection.zero(a.dim), *family.cumulative]


def kappa_rho(
    rho: DensityState,
    a: HermitianOperator,
    s: Number,
    mode: KappaMode = 'chain',
    sample: Sequence[Projection] | None = None,
) -> Projection:
    """The meet of the projections ``P`` with ``s <= mu_rho(P)``.

    In ``chain`` mode the meet runs over the spectral chain ``{E^A_r}`` of ``A``
    and is the smallest ``E^A_r`` of sufficient weight. In ``global`` mode it
    runs over ``sample`` (by default the chain together with the
    eigenprojections of ``A``); this meet is generally not a left adjoint
    of ``mu_rho``.
    """
    _check_dims(rho, a)
    level = _check_level(s)
    if mode == 'chain':
        for projection in _spectral_chain(a):
            if _at_least(mu_rho(rho, projection), level):
                return projection
        return Projection.identity(a.dim)
    if mode != 'global':
        raise ValueError(f'unknown kappa mode {mode!r}')
    if sample is None:
        sample = [*_spectral_chain(a), *eig_hermitian(a).eigenprojections]
    heavy = [p for p in sample if _at_least(mu_rho(rho, p), level)]
    logger.debug('global kappa at s=%s meets %d of %d sampled projections', level, len(heavy), len(sample))
    return meet_all(heavy, a.dim)


def quantum_quantile(rho: DensityState, a: HermitianOperator, s: Number) -> ExtendedReal:
    """``inf{r : s <= mu_rho(E^A_r)}``; ``-inf`` at ``s = 0``."""
    _check_dims(rho, a)
    level = _check_level(s)
    family = spectral_family_of(a)
    for r in (NEG_INF, *family.extended_breakpoints):
        if _at_least(mu_rho(rho, family(r)), level):
            return r
    return POS_INF


def quantum_quantile_global(
    rho: DensityState,
    a: HermitianOperator,
    s: Number,
    sample: Sequence[Projection] | None = None,
) -> ExtendedReal:
    """``o^A(kappa_rho(s))`` with the global meet."""
    return q_observable(a, kappa_rho(rho, a, s, 'global', sample))


def pairing(rho: DensityState, a: HermitianOperator, delta: BorelSet) -> float:
    """``Prob(A in delta; rho) = mu_rho(e^A(delta))``."""
    _check_dims(rho, a)
    return mu_rho(rho, spectral_measure(a, delta))


def expectation(rho: DensityState, a: HermitianOperator) -> float:
    _check_dims(rho, a)
    return float(np.trace(rho.matrix @ a.matrix).real)


def expectation_from_cdf(rho: DensityState, a: HermitianOperator) -> float:
    """``sum b_i (C(b_i) - C(b_{i-1}))`` over the breakpoints of ``A``."""
    family = spectral_family_of(a)
    total = 0.0
    previous = 0.0
    for breakpoint in family.breakpoints:
        current = quantum_cdf(rho, a, breakpoint)
        total += breakpoint * (current - previous)
        previous = current
    return total


def quantum_cdf_map(rho: DensityState, a: HermitianOperator) -> MonotoneMap[ExtendedReal, float]:
    family = spectral_family_of(a)
    support = (NEG_INF, *family.extended_breakpoints, POS_INF)
    return MonotoneMap(EXTENDED_REALS, UNIT_INTERVAL, lambda r: quantum_cdf(rho, a, r), support, 'quantum cdf')


def quantum_quantile_map(
    rho: DensityState, a: HermitianOperator, grid: Sequence[Number]
) -> MonotoneMap[Number, ExtendedReal]:
    levels = set(grid)
    levels.update(quantum_cdf(rho, a, b) for b in spectral_family_of(a).breakpoints)
    levels.add(0)
    support = tuple(sorted(levels))
    return MonotoneMap(UNIT_INTERVAL, EXTENDED_REALS, lambda s: quantum_quantile(rho, a, s), support, 'quantum quantile')


def gelfand_shadow(rho: DensityState, a: HermitianOperator, name: str = 'shadow') -> Fixture:
    """The classical picture of ``(rho, A)`` on the Gelfand spectrum of ``V_A``.

    Points are the eigenprojections of ``A``, the random variable is the
    eigenvalue on each of them and the weight is ``tr(rho p)``. Weights are
    renormalized as exact fractions so they sum to one.
    """
    _check_dims(rho, a)
    decomposition = eig_hermitian(a)
    raw = [Fraction(repr(max(0.0, mu_rho(rho, p)))) for p in decomposition.eigenprojections]
    total = sum(raw, Fraction(0))
    weights = [w / total for w in raw]
    values = [as_exact(v) for v in decomposition.eigenvalues]
    points = [f'p{i}' for i in range(len(values))]
    return Fixture.build(name, points, weights, values)


def real_rank_one_sample(count: int) -> tuple[Projection, ...]:
    """Rank-one real projections in dimension two at angles ``k pi / count``, plus the identity."""
    if count < 1:
        raise ValueError('count must be positive')
    sample = []
    for k in range(count):
        angle = k * math.pi / count
        sample.append(Projection.onto([math.cos(angle), math.sin(angle)]))
    sample.append(Projection.identity(2))
    return tuple(sample)


__all__ = (
    'DensityState',
    'KappaMode',
    'ProjectionMeasure',
    'expectation',
    'expectation_from_cdf',
    'gelfand_shadow',
    'kappa_rho',
    'mu_rho',
    'pairing',
    'quantum_cdf',
    'quantum_cdf_map',
    'quantum_quantile',
    'quantum_quantile_global',
    'quantum_quantile_map',
    'real_rank_one_sample',
)
