"""Spectral families, spectral measures and q-observable functions.

A Hermitian operator ``A`` gives a right-continuous spectral family
``r -> E^A_r`` (the projection-valued CDF of ``A``) whose left adjoint is the
q-observable function ``o^A(P) = inf{r : P <= E^A_r}``. With finite spectra
every infimum is a minimum over the eigenvalues, so all scans are exact.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
from collections.abc import Iterable, Sequence

import numpy as np

from qpresheaf.config import get_tolerances
from qpresheaf.errors import AxiomViolation, DimMismatch, NotMonotone
from qpresheaf.linop_core import (
    HermitianOperator,
    Projection,
    ProjectionLattice,
    clean_projection,
    eig_hermitian,
    join_all,
    proj_eq,
    proj_join,
    proj_leq,
    proj_meet,
)
from qpresheaf.order_core import EXTENDED_REALS, NEG_INF, POS_INF, ExtendedReal, LatticeCDF, MonotoneMap, Number, Tag

logger = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class Interval:
    lo: ExtendedReal
    hi: ExtendedReal
    lo_closed: bool = True
    hi_closed: bool = True

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi or (self.lo == self.hi and not (self.lo_closed and self.hi_closed))

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi and self.lo_closed and self.hi_closed

    def contains(self, x: ExtendedReal) -> bool:
        above = self.lo < x or (self.lo_closed and self.lo == x)
        below = x < self.hi or (self.hi_closed and x == self.hi)
        return above and below

    def intersect(self, other: Interval) -> Interval:
        if self.lo > other.lo:
            lo, lo_closed = self.lo, self.lo_closed
        elif other.lo > self.lo:
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed and other.lo_closed
        if self.hi < other.hi:
            hi, hi_closed = self.hi, self.hi_closed
        elif other.hi < self.hi:
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed and other.hi_closed
        return Interval(lo, hi, lo_closed, hi_closed)


def _sort_key(interval: Interval) -> tuple[float, bool]:
    return float(interval.lo), not interval.lo_closed


def _normalize(components: Iterable[Interval]) -> tuple[Interval, ...]:
    ordered = sorted((c for c in components if not c.is_empty), key=_sort_key)
    merged: list[Interval] = []
    for current in ordered:
        if merged:
            last = merged[-1]
            touching = current.lo < last.hi or (current.lo == last.hi and (last.hi_closed or current.lo_closed))
            if touching:
                if current.hi > last.hi:
                    merged[-1] = Interval(last.lo, current.hi, last.lo_closed, current.hi_closed)
                elif current.hi == last.hi:
                    merged[-1] = Interval(last.lo, last.hi, last.lo_closed, last.hi_closed or current.hi_closed)
                continue
        merged.append(current)
    return tuple(merged)


@dataclasses.dataclass(frozen=True)
class BorelSet:
    """Finite union of intervals and points of the extended reals.

    Components are kept disjoint and ascending; a point is a degenerate closed
    interval.
    """

    components: tuple[Interval, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, 'components', _normalize(self.components))

    @classmethod
    def empty(cls) -> BorelSet:
        return cls()

    @classmethod
    def everything(cls) -> BorelSet:
        return cls((Interval(NEG_INF, POS_INF),))

    @classmethod
    def interval(
        cls,
        lo: ExtendedReal | Number | str,
        hi: ExtendedReal | Number | str,
        lo_closed: bool = True,
        hi_closed: bool = True,
    ) -> BorelSet:
        return cls((Interval(ExtendedReal.coerce(lo), ExtendedReal.coerce(hi), lo_closed, hi_closed),))

    @classmethod
    def points(cls, *values: ExtendedReal | Number | str) -> BorelSet:
        return cls(tuple(Interval(ExtendedReal.coerce(v), ExtendedReal.coerce(v)) for v in values))

    @classmethod
    def down_to(cls, r: ExtendedReal | Number | str) -> BorelSet:
        """The set ``[-inf, r]``."""
        return cls.interval(NEG_INF, r)

    def __contains__(self, x: ExtendedReal | Number) -> bool:
        point = ExtendedReal.coerce(x)
        return any(c.contains(point) for c in self.components)

    def __or__(self, other: BorelSet) -> BorelSet:
        return BorelSet(self.components + other.components)

    def __and__(self, other: BorelSet) -> BorelSet:
        return BorelSet(tuple(a.intersect(b) for a in self.components for b in other.components))

    def complement(self) -> BorelSet:
        gaps = []
        lo, lo_closed = NEG_INF, True
        for component in self.components:
            gaps.append(Interval(lo, component.lo, lo_closed, not component.lo_closed))
            lo, lo_closed = component.hi, not component.hi_closed
        gaps.append(Interval(lo, POS_INF, lo_closed, True))
        return BorelSet(tuple(gaps))

    @property
    def is_empty(self) -> bool:
        return not self.components

    @property
    def intervals(self) -> tuple[Interval, ...]:
        return tuple(c for c in self.components if not c.is_point)

    @property
    def point_values(self) -> tuple[ExtendedReal, ...]:
        return tuple(c.lo for c in self.components if c.is_point)


@dataclasses.dataclass(frozen=True, eq=False)
class SpectralFamily:
    """Right-continuous projection-valued step map ``r -> E_r``.

    ``cumulative[i]`` is ``E_r`` on ``[breakpoints[i], breakpoints[i+1])``;
    below the first breakpoint the family is zero and the last projection is
    the identity.
    """

    breakpoints: tuple[float, ...]
    cumulative: tuple[Projection, ...]
    dim: int

    def __post_init__(self) -> None:
        if len(self.breakpoints) != len(self.cumulative) or not self.breakpoints:
            raise ValueError('a spectral family needs one projection per breakpoint')
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise NotMonotone('breakpoints must be strictly ascending')
        if any(not proj_leq(a, b) for a, b in zip(self.cumulative, self.cumulative[1:])):
            raise NotMonotone('spectral family is not monotone')
        if not proj_eq(self.cumulative[-1], Projection.identity(self.dim)):
            raise AxiomViolation('the last projection of a spectral family must be the identity')

    def __call__(self, r: ExtendedReal | Number) -> Projection:
        point = ExtendedReal.coerce(r)
        if point.tag is Tag.POS_INF:
            return self.cumulative[-1]
        current = Projection.zero(self.dim)
        for breakpoint, projection in zip(self.breakpoints, self.cumulative):
            if ExtendedReal.finite(breakpoint) <= point:
                current = projection
            else:
                break
        return current

    @property
    def extended_breakpoints(self) -> tuple[ExtendedReal, ...]:
        return tuple(ExtendedReal.finite(b) for b in self.breakpoints)

    def increments(self) -> tuple[Projection, ...]:
        """The eigenprojections ``E_{b_i} - E_{b_{i-1}}``."""
        previous = np.zeros((self.dim, self.dim), dtype=np.complex128)
        result = []
        for projection in self.cumulative:
            result.append(clean_projection(projection.matrix - previous))
            previous = projection.matrix
        return tuple(result)

    def as_cdf(self) -> LatticeCDF[Projection]:
        return LatticeCDF(ProjectionLattice(self.dim), self.__call__, self.extended_breakpoints, 'spectral family')

    def as_map(self) -> MonotoneMap[ExtendedReal, Projection]:
        return self.as_cdf().as_map()

    def close_to(self, other: SpectralFamily) -> bool:
        if len(self.breakpoints) != len(other.breakpoints):
            return False
        same_points = all(ExtendedReal.finite(a) == ExtendedReal.finite(b) for a, b in zip(self.breakpoints, other.breakpoints))
        tol = get_tolerances().reconstruct_tol
        return same_points and all(
            float(np.linalg.norm(a.matrix - b.matrix, 2)) <= tol for a, b in zip(self.cumulative, other.cumulative)
        )


def _operator(a: HermitianOperator | object) -> HermitianOperator:
    return a if isinstance(a, HermitianOperator) else HermitianOperator(a)


def spectral_family_of(a: HermitianOperator) -> SpectralFamily:
    """``E_r`` is the sum of the eigenprojections with eigenvalue ``<= r``."""
    decomposition = eig_hermitian(_operator(a))
    dim = decomposition.eigenprojections[0].dim
    running = np.zeros((dim, dim), dtype=np.complex128)
    cumulative = []
    for projection in decomposition.eigenprojections:
        running = running + projection.matrix
        cumulative.append(clean_projection(running))
    return SpectralFamily(decomposition.eigenvalues, tuple(cumulative), dim)


@dataclasses.dataclass(frozen=True, eq=False)
class SpectralMeasure:
    """Projection-valued spectral measure ``e^A``."""

    eigenvalues: tuple[float, ...]
    eigenprojections: tuple[Projection, ...]

    @classmethod
    def of(cls, a: HermitianOperator) -> SpectralMeasure:
        decomposition = eig_hermitian(_operator(a))
        return cls(decomposition.eigenvalues, decomposition.eigenprojections)

    @property
    def dim(self) -> int:
        return self.eigenprojections[0].dim

    def __call__(self, delta: BorelSet) -> Projection:
        total = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for value, projection in zip(self.eigenvalues, self.eigenprojections):
            if ExtendedReal.finite(value) in delta:
                total = total + projection.matrix
        return clean_projection(total)


def spectral_measure(a: HermitianOperator, delta: BorelSet) -> Projection:
    return SpectralMeasure.of(a)(delta)


class QObservableFunction:
    """A join-preserving map from projections to the extended reals.

    It is backed either by a spectral family (then evaluation is the left
    adjoint scan) or by a hand-built table of generating projections. A table
    is evaluated exactly on its entries and through the family it generates
    elsewhere.
    """

    def __init__(
        self,
        dim: int,
        family: SpectralFamily | None = None,
        table: Sequence[tuple[Projection, ExtendedReal]] | None = None,
    ) -> None:
        if (family is None) == (table is None):
            raise ValueError('give exactly one of family or table')
        self.dim = dim
        self.family = family
        self.table = tuple((p, ExtendedReal.coerce(v)) for p, v in table) if table is not None else None
        if self.table is not None and any(p.dim != dim for p, _ in self.table):
            raise DimMismatch('table projections have the wrong dimension')

    @classmethod
    def of(cls, a: HermitianOperator) -> QObservableFunction:
        family = spectral_family_of(a)
        return cls(family.dim, family=family)

    @classmethod
    def from_table(cls, entries: Sequence[tuple[Projection, ExtendedReal | Number | str]]) -> QObservableFunction:
        if not entries:
            raise ValueError('a q-observable table needs entries')
        return cls(entries[0][0].dim, table=[(p, ExtendedReal.coerce(v)) for p, v in entries])

    @functools.cached_property
    def _family(self) -> SpectralFamily:
        if self.family is not None:
            return self.family
        return spectral_family_from_q(self)

    def __call__(self, p: Projection) -> ExtendedReal:
        if p.dim != self.dim:
            raise DimMismatch(f'projection of dim {p.dim} for a q-observable function of dim {self.dim}')
        if self.table is not None:
            for projection, value in self.table:
                if proj_eq(projection, p):
                    return value
        if proj_leq(p, Projection.zero(self.dim)):
            return NEG_INF
        family = self._family
        for breakpoint, projection in zip(family.breakpoints, family.cumulative):
            if proj_leq(p, projection):
                return ExtendedReal.finite(breakpoint)
        return ExtendedReal.finite(family.breakpoints[-1])

    def generators(self) -> tuple[tuple[Projection, ExtendedReal], ...]:
        """Projections whose values determine the function."""
        if self.table is not None:
            return self.table
        assert self.family is not None
        return tuple(
            (projection, ExtendedReal.finite(value))
            for value, projection in zip(self.family.breakpoints, self.family.increments())
        )

    def as_map(self, support: Sequence[Projection]) -> MonotoneMap[Projection, ExtendedReal]:
        return MonotoneMap(ProjectionLattice(self.dim), EXTENDED_REALS, self, tuple(support), 'q-observable', check=False)


def q_observable(a: HermitianOperator, p: Projection) -> ExtendedReal:
    """``o^A(P) = inf{r : P <= E^A_r}``; ``-inf`` exactly for ``P = 0``."""
    operator = _operator(a)
    if operator.dim != p.dim:
        raise DimMismatch(f'operator of dim {operator.dim} and projection of dim {p.dim}')
    return QObservableFunction.of(operator)(p)


def spectral_family_from_q(o: QObservableFunction) -> SpectralFamily:
    """Right adjoint of a q-observable function: ``E_r = join{P : o(P) <= r}``."""
    generators = o.generators()
    for projection, value in generators:
        if value.tag is Tag.NEG_INF and not proj_leq(projection, Projection.zero(o.dim)):
            raise AxiomViolation('q-observable function takes -inf on a non-zero projection', 'o(P) > -inf')
    finite = [(p, v) for p, v in generators if v.tag is Tag.FINITE]
    if not proj_eq(join_all((p for p, _ in finite), o.dim), Projection.identity(o.dim)):
        raise AxiomViolation('projections with finite value do not join to the identity', 'finite cover')
    values = sorted({float(v) for _, v in finite})
    breakpoints: list[float] = []
    for value in values:
        if not breakpoints or ExtendedReal.finite(value) != ExtendedReal.finite(breakpoints[-1]):
            breakpoints.append(value)
    cumulative = tuple(
        join_all((p for p, v in finite if v <= ExtendedReal.finite(b)), o.dim) for b in breakpoints
    )
    return SpectralFamily(tuple(breakpoints), cumulative, o.dim)


def operator_from_family(family: SpectralFamily) -> HermitianOperator:
    """``A = sum b_i (E_{b_i} - E_{b_{i-1}})``."""
    total = np.zeros((family.dim, family.dim), dtype=np.complex128)
    for value, projection in zip(family.breakpoints, family.increments()):
        total = total + value * projection.matrix
    return HermitianOperator(total, check=False)


def operator_from_q(o: QObservableFunction) -> HermitianOperator:
    return operator_from_family(spectral_family_from_q(o))


def _merged_breakpoints(a: SpectralFamily, b: SpectralFamily) -> list[float]:
    return sorted(set(a.breakpoints) | set(b.breakpoints))


def spectral_order_leq(a: HermitianOperator, b: HermitianOperator) -> bool:
    """``A <=_s B`` iff ``E^A_r >= E^B_r`` for every ``r``."""
    a, b = _operator(a), _operator(b)
    if a.dim != b.dim:
        raise DimMismatch(f'operators of dims {a.dim} and {b.dim}')
    family_a, family_b = spectral_family_of(a), spectral_family_of(b)
    return all(proj_leq(family_b(r), family_a(r)) for r in _merged_breakpoints(family_a, family_b))


def _family_from_steps(points: list[float], projections: list[Projection], dim: int) -> SpectralFamily:
    breakpoints: list[float] = []
    cumulative: list[Projection] = []
    previous = Projection.zero(dim)
    for point, projection in zip(points, projections):
        if not proj_eq(projection, previous):
            breakpoints.append(point)
            cumulative.append(projection)
            previous = projection
    return SpectralFamily(tuple(breakpoints), tuple(cumulative), dim)


def spectral_min(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Greatest lower bound in the spectral order: ``E_r = E^A_r v E^B_r``."""
    family_a, family_b = spectral_family_of(a), spectral_family_of(b)
    points = _merged_breakpoints(family_a, family_b)
    joins = [proj_join(family_a(r), family_b(r)) for r in points]
    return operator_from_family(_family_from_steps(points, joins, family_a.dim))


def spectral_max(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Least upper bound in the spectral order: ``E_r = E^A_r ^ E^B_r``."""
    family_a, family_b = spectral_family_of(a), spectral_family_of(b)
    points = _merged_breakpoints(family_a, family_b)
    meets = [proj_meet(family_a(r), family_b(r)) for r in points]
    return operator_from_family(_family_from_steps(points, meets, family_a.dim))


@dataclasses.dataclass(frozen=True)
class PiecewiseLinearMap:
    """Monotone, left-continuous piecewise-linear map of the reals.

    ``knots`` are ``(x, y)`` pairs with non-decreasing ``x``. A repeated ``x``
    is a jump; the first of the repeated knots holds the value at ``x``.
    Outside the knots the map continues with the slope of the outermost
    segment. On the extended reals it fixes ``-inf`` and ``+inf``.
    """

    knots: tuple[tuple[float, float], ...]

    def __post_init__(self) -> None:
        if not self.knots:
            raise ValueError('a piecewise-linear map needs at least one knot')
        xs = [x for x, _ in self.knots]
        ys = [y for _, y in self.knots]
        if any(b < a for a, b in zip(xs, xs[1:])):
            raise NotMonotone('knot abscissae must be non-decreasing')
        if any(b < a for a, b in zip(ys, ys[1:])):
            raise NotMonotone('knot values must be non-decreasing')

    @classmethod
    def affine(cls, slope: float, offset: float) -> PiecewiseLinearMap:
        if slope < 0:
            raise NotMonotone('a decreasing affine map is not monotone')
        return cls(((0.0, offset), (1.0, slope + offset)))

    @classmethod
    def constant(cls, value: float) -> PiecewiseLinearMap:
        return cls(((0.0, value),))

    @staticmethod
    def _slope(a: tuple[float, float], b: tuple[float, float]) -> float:
        return (b[1] - a[1]) / (b[0] - a[0]) if b[0] > a[0] else 0.0

    def __call__(self, x: float) -> float:
        knots = self.knots
        if len(knots) == 1:
            return knots[0][1]
        if x <= knots[0][0]:
            return knots[0][1] + self._slope(knots[0], knots[1]) * (x - knots[0][0])
        if x > knots[-1][0]:
            return knots[-1][1] + self._slope(knots[-2], knots[-1]) * (x - knots[-1][0])
        for (x0, y0), (x1, y1) in zip(knots, knots[1:]):
            if x0 < x <= x1:
                if x == x1:
                    return y1
                return y0 + (y1 - y0) * (x - x0) / (x1 - x0)
        return knots[-1][1]

    def extended(self, r: ExtendedReal) -> ExtendedReal:
        if not r.is_finite:
            return r
        return ExtendedReal.finite(self(float(r)))


def apply_monotone(a: HermitianOperator, f: PiecewiseLinearMap) -> HermitianOperator:
    """Functional calculus ``f(A) = sum f(lambda) P_lambda``."""
    decomposition = eig_hermitian(_operator(a))
    dim = decomposition.eigenprojections[0].dim
    total = np.zeros((dim, dim), dtype=np.complex128)
    for value, projection in zip(decomposition.eigenvalues, decomposition.eigenprojections):
        total = total + f(value) * projection.matrix
    return HermitianOperator(total, check=False)


@dataclasses.dataclass(frozen=True)
class RescaleViolation:
    projection: int
    rescaled: ExtendedReal
    expected: ExtendedReal


@dataclasses.dataclass(frozen=True)
class RescaleReport:
    checked: int
    violations: tuple[RescaleViolation, ...]
    notes: tuple[str, ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def rescale_check(
    a: HermitianOperator,
    f: PiecewiseLinearMap,
    samples: Sequence[Projection] = (),
    tol: float | None = None,
) -> RescaleReport:
    """Verify ``o^{f(A)}(P) = f(o^A(P))`` on eigenprojections and ``samples``.

    The zero projection is skipped: how ``f`` acts on ``-inf`` is a convention,
    recorded in the report notes.
    """
    operator = _operator(a)
    tol = get_tolerances().tol if tol is None else tol
    o_a = QObservableFunction.of(operator)
    o_fa = QObservableFunction.of(apply_monotone(operator, f))
    projections = [*spectral_family_of(operator).increments(), *spectral_family_of(operator).cumulative, *samples]
    violations = []
    notes = []
    checked = 0
    for index, projection in enumerate(projections):
        if proj_leq(projection, Projection.zero(operator.dim)):
            notes.append(f'projection {index} is zero and was skipped (-inf convention)')
            continue
        checked += 1
        rescaled = o_fa(projection)
        expected = f.extended(o_a(projection))
        if abs(float(rescaled) - float(expected)) > tol:
            violations.append(RescaleViolation(index, rescaled, expected))
    logger.debug('rescale check: %d projections, %d violations', checked, len(violations))
    return RescaleReport(checked, tuple(violations), tuple(notes))


__all__ = (
    'BorelSet',
    'Interval',
    'PiecewiseLinearMap',
    'QObservableFunction',
    'RescaleReport',
    'RescaleViolation',
    'SpectralFamily',
    'SpectralMeasure',
    'apply_monotone',
    'operator_from_family',
    'operator_from_q',
    'q_observable',
    'rescale_check',
    'spectral_family_from_q',
    'spectral_family_of',
    'spectral_max',
    'spectral_measure',
    'spectral_min',
    'spectral_order_leq',
)
