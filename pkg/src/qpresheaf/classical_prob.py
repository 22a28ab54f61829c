"""Finite classical probability.

A random variable ``A`` on a finite sample space has the B(Omega)-valued CDF
``r -> A^-1([-inf, r])`` (:func:`lcdf`) whose left adjoint is the
B(Omega)-quantile :func:`lquantile`. Composing with a probability measure
gives the usual CDF and quantile function, which form a Galois connection
between the extended reals and ``[0, 1]``.

Weights and values are kept as :class:`~fractions.Fraction` whenever they are
decimal fractions, so the laws can be verified exactly.
"""

from __future__ import annotations

import dataclasses
import itertools
import logging
from collections.abc import Hashable, Iterable, Iterator, Mapping, Sequence
from fractions import Fraction

import numpy as np

from qpresheaf.config import get_tolerances
from qpresheaf.errors import DomainMismatch, OutOfRange
from qpresheaf.order_core import (
    EXTENDED_REALS,
    NEG_INF,
    POS_INF,
    UNIT_INTERVAL,
    ExtendedReal,
    FiniteLattice,
    LatticeCDF,
    MonotoneMap,
    Number,
    Tag,
    as_exact,
    is_exact,
)

logger = logging.getLogger(__name__)

Label = Hashable
Event = frozenset


@dataclasses.dataclass(frozen=True)
class FiniteSampleSpace:
    points: tuple[Label, ...]

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError('a sample space needs at least one point')
        if len(set(self.points)) != len(self.points):
            raise ValueError('sample space labels must be distinct')

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[Label]:
        return iter(self.points)

    @property
    def whole(self) -> frozenset[Label]:
        return frozenset(self.points)


class EventLattice:
    """The powerset B(Omega) of a finite sample space."""

    def __init__(self, space: FiniteSampleSpace) -> None:
        self.space = space

    @property
    def top(self) -> frozenset[Label]:
        return self.space.whole

    @property
    def bottom(self) -> frozenset[Label]:
        return frozenset()

    def leq(self, a: frozenset[Label], b: frozenset[Label]) -> bool:
        return a <= b

    def meet(self, items: Iterable[frozenset[Label]]) -> frozenset[Label]:
        result = self.top
        for item in items:
            result = result & item
        return result

    def join(self, items: Iterable[frozenset[Label]]) -> frozenset[Label]:
        result: frozenset[Label] = frozenset()
        for item in items:
            result = result | item
        return result

    def complement(self, event: frozenset[Label]) -> frozenset[Label]:
        return self.top - event

    def events(self) -> Iterator[frozenset[Label]]:
        points = self.space.points
        for size in range(len(points) + 1):
            for combination in itertools.combinations(points, size):
                yield frozenset(combination)

    def as_finite_lattice(self) -> FiniteLattice[frozenset[Label]]:
        return FiniteLattice(list(self.events()), lambda a, b: a <= b)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EventLattice) and other.space == self.space

    def __hash__(self) -> int:
        return hash(self.space)


@dataclasses.dataclass(frozen=True)
class RandomVariable:
    space: FiniteSampleSpace
    values: Mapping[Label, Number]

    def __post_init__(self) -> None:
        missing = [point for point in self.space if point not in self.values]
        if missing:
            raise ValueError(f'random variable is not defined on {missing!r}')
        object.__setattr__(self, 'values', {point: as_exact(self.values[point]) for point in self.space})

    def __call__(self, point: Label) -> Number:
        return self.values[point]

    @property
    def image(self) -> tuple[Number, ...]:
        """Distinct values, ascending."""
        return tuple(sorted(set(self.values.values())))

    @property
    def breakpoints(self) -> tuple[ExtendedReal, ...]:
        return tuple(ExtendedReal.finite(v) for v in self.image)

    def __hash__(self) -> int:
        return hash((self.space, tuple(self.values.items())))


@dataclasses.dataclass(frozen=True)
class ProbabilityMeasure:
    space: FiniteSampleSpace
    weights: Mapping[Label, Number]

    def __post_init__(self) -> None:
        missing = [point for point in self.space if point not in self.weights]
        if missing:
            raise ValueError(f'no weight for {missing!r}')
        weights = {point: as_exact(self.weights[point]) for point in self.space}
        if any(w < 0 for w in weights.values()):
            raise OutOfRange('probability weights must be non-negative', 'non-negative')
        total = sum(weights.values())
        if abs(float(total) - 1.0) > 1e-12 and total != 1:
            raise OutOfRange(f'probability weights sum to {total}, not 1', 'normalized')
        object.__setattr__(self, 'weights', weights)

    @property
    def exact(self) -> bool:
        return all(is_exact(w) for w in self.weights.values())

    def __call__(self, event: Iterable[Label]) -> Number:
        return sum((self.weights[point] for point in event), Fraction(0) if self.exact else 0.0)

    def equivalent(self, a: frozenset[Label], b: frozenset[Label]) -> bool:
        """Equality modulo null sets."""
        return self(a ^ b) == 0

    @classmethod
    def dirac(cls, space: FiniteSampleSpace, point: Label) -> ProbabilityMeasure:
        return cls(space, {p: int(p == point) for p in space})

    def __hash__(self) -> int:
        return hash((self.space, tuple(self.weights.items())))


def _check_unit(value: Number, name: str) -> Number:
    exact = as_exact(value)
    if exact < 0 or exact > 1:
        raise OutOfRange(f'{name} must lie in [0, 1], got {value!r}')
    return exact


def _same_space(a: RandomVariable, mu: ProbabilityMeasure) -> None:
    if a.space != mu.space:
        raise DomainMismatch('random variable and measure live on different sample spaces')


def lcdf(a: RandomVariable, r: ExtendedReal | Number) -> frozenset[Label]:
    """``A^-1([-inf, r])``."""
    point = ExtendedReal.coerce(r)
    if point.tag is Tag.NEG_INF:
        return frozenset()
    if point.tag is Tag.POS_INF:
        return a.space.whole
    return frozenset(p for p in a.space if ExtendedReal.finite(a(p)) <= point)


def lquantile(a: RandomVariable, event: Iterable[Label]) -> ExtendedReal:
    """``inf{r : S <= lcdf(A, r)}``, the largest value of ``A`` on ``S``."""
    values = [a(point) for point in event]
    if not values:
        return NEG_INF
    return ExtendedReal.finite(max(values))


def lcdf_of(a: RandomVariable) -> LatticeCDF[frozenset[Label]]:
    return LatticeCDF(EventLattice(a.space), lambda r: lcdf(a, r), a.breakpoints, 'lcdf')


def cdf(a: RandomVariable, mu: ProbabilityMeasure, r: ExtendedReal | Number) -> Number:
    """``mu(lcdf(A, r))``."""
    _same_space(a, mu)
    return mu(lcdf(a, r))


def quantile(a: RandomVariable, mu: ProbabilityMeasure, p: Number) -> ExtendedReal:
    """``inf{r : p <= cdf(A, mu, r)}``; ``-inf`` at ``p = 0``."""
    _same_space(a, mu)
    level = _check_unit(p, 'p')
    for r in (NEG_INF, *a.breakpoints):
        if level <= cdf(a, mu, r) or _close(level, cdf(a, mu, r)):
            return r
    return POS_INF


def _close(x: Number, y: Number) -> bool:
    if is_exact(x) and is_exact(y):
        return x == y
    return abs(float(x) - float(y)) <= get_tolerances().tol


def _chain(a: RandomVariable) -> list[frozenset[Label]]:
    return [frozenset(), *(lcdf(a, r) for r in a.breakpoints)]


def kappa_chain(a: RandomVariable, mu: ProbabilityMeasure, s: Number) -> frozenset[Label]:
    """Smallest event of the chain ``{lcdf(A, r)}`` with weight at least ``s``.

    ``mu`` preserves meets along this chain, so ``quantile = lquantile o kappa_chain``.
    """
    _same_space(a, mu)
    level = _check_unit(s, 's')
    for event in _chain(a):
        if level <= mu(event) or _close(level, mu(event)):
            return event
    return a.space.whole


def kappa_global(mu: ProbabilityMeasure, s: Number) -> frozenset[Label]:
    """``meet{T : s <= mu(T)}`` over all of B(Omega).

    This is not an adjoint for a generic ``mu`` since ``mu`` does not preserve
    meets of unrelated events; kept to exhibit the failure.
    """
    level = _check_unit(s, 's')
    lattice = EventLattice(mu.space)
    return lattice.meet(e for e in lattice.events() if level <= mu(e) or _close(level, mu(e)))


def measure_map(mu: ProbabilityMeasure) -> MonotoneMap[frozenset[Label], Number]:
    """``mu`` as a monotone map ``B(Omega) -> [0, 1]``."""
    lattice = EventLattice(mu.space).as_finite_lattice()
    return MonotoneMap(lattice, UNIT_INTERVAL, mu, lattice.elements, 'measure')


def lcdf_map(a: RandomVariable) -> MonotoneMap[ExtendedReal, frozenset[Label]]:
    return lcdf_of(a).as_map()


def cdf_map(a: RandomVariable, mu: ProbabilityMeasure) -> MonotoneMap[ExtendedReal, Number]:
    support = (NEG_INF, *a.breakpoints, POS_INF)
    return MonotoneMap(EXTENDED_REALS, UNIT_INTERVAL, lambda r: cdf(a, mu, r), support, 'cdf')


def unit_grid(steps: int = 100) -> tuple[Fraction, ...]:
    return tuple(Fraction(k, steps) for k in range(steps + 1))


def quantile_map(
    a: RandomVariable, mu: ProbabilityMeasure, grid: Sequence[Number] | None = None
) -> MonotoneMap[Number, ExtendedReal]:
    """The quantile function on a grid of levels, including every CDF value."""
    levels = set(grid if grid is not None else unit_grid())
    levels.update(cdf(a, mu, r) for r in a.breakpoints)
    levels.add(0)
    support = tuple(sorted(levels))
    return MonotoneMap(UNIT_INTERVAL, EXTENDED_REALS, lambda p: quantile(a, mu, p), support, 'quantile')


@dataclasses.dataclass(frozen=True)
class Fixture:
    """A named finite probability space with a random variable."""

    name: str
    space: FiniteSampleSpace
    variable: RandomVariable
    measure: ProbabilityMeasure

    @classmethod
    def build(
        cls, name: str, points: Sequence[Label], weights: Sequence[Number | str], values: Sequence[Number | str]
    ) -> Fixture:
        if not (len(points) == len(weights) == len(values)):
            raise ValueError('points, weights and values must have equal length')
        space = FiniteSampleSpace(tuple(points))

        def exact(value: Number | str) -> Number:
            return Fraction(value) if isinstance(value, str) else as_exact(value)

        variable = RandomVariable(space, {p: exact(v) for p, v in zip(points, values)})
        measure = ProbabilityMeasure(space, {p: exact(w) for p, w in zip(points, weights)})
        return cls(name, space, variable, measure)


def random_fixture(rng: np.random.Generator, size: int, name: str = 'random') -> Fixture:
    """Seeded fixture with exact decimal weights (multiples of 1/100)."""
    if size < 1:
        raise ValueError('a fixture needs at least one point')
    cuts = sorted(int(c) for c in rng.integers(0, 101, size=size - 1))
    bounds = [0, *cuts, 100]
    weights = [Fraction(b - a, 100) for a, b in zip(bounds, bounds[1:])]
    values = [Fraction(int(v), 2) for v in rng.integers(-10, 11, size=size)]
    points = [f'w{i}' for i in range(size)]
    return Fixture.build(name, points, weights, values)


__all__ = (
    'Event',
    'EventLattice',
    'FiniteSampleSpace',
    'Fixture',
    'ProbabilityMeasure',
    'RandomVariable',
    'cdf',
    'cdf_map',
    'kappa_chain',
    'kappa_global',
    'lcdf',
    'lcdf_map',
    'lcdf_of',
    'lquantile',
    'measure_map',
    'quantile',
    'quantile_map',
    'random_fixture',
    'unit_grid',
)
