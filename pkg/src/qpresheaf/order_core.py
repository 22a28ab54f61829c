"""Posets, the extended real line and Galois connections.

Everything here is finite: lattices are given by their elements, maps on the
extended reals are right-continuous step functions with finitely many
breakpoints. Adjoints are therefore computed by exact scans, following the
adjoint functor theorem for posets: a meet-preserving ``g`` has the left adjoint
``y -> meet{x : y <= g(x)}``.
"""

from __future__ import annotations

import dataclasses
import enum
import functools
import itertools
import logging
import math
from collections.abc import Callable, Hashable, Iterable, Sequence
from fractions import Fraction
from typing import Any, Generic, Literal, Protocol, TypeVar, Union

import numpy as np

from qpresheaf.config import get_tolerances
from qpresheaf.errors import DomainMismatch, NotMeetPreserving, NotMonotone

logger = logging.getLogger(__name__)

Number = Union[int, float, Fraction]
T = TypeVar('T')
X = TypeVar('X')
Y = TypeVar('Y')

#: Exhaustive pair checks are skipped above this support size.
EXHAUSTIVE_LIMIT = 512


def is_exact(value: object) -> bool:
    return isinstance(value, (int, Fraction)) and not isinstance(value, bool)


def as_exact(value: Number) -> Number:
    """Return ``value`` as a :class:`~fractions.Fraction` when it is a finite decimal.

    Floats are converted through their shortest ``repr`` so that ``0.2`` becomes ``1/5``.
    """
    if isinstance(value, float):
        if not math.isfinite(value):
            return value
        return Fraction(repr(value))
    return value


def values_close(a: Number, b: Number, tol: float | None = None) -> bool:
    """Exact equality for rationals, absolute tolerance otherwise."""
    if is_exact(a) and is_exact(b):
        return a == b
    tol = get_tolerances().tol if tol is None else tol
    return abs(float(a) - float(b)) <= tol


class Tag(enum.IntEnum):
    NEG_INF = -1
    FINITE = 0
    POS_INF = 1


@functools.total_ordering
class ExtendedReal:
    """A point of the extended real line ``R u {-inf, +inf}``.

    Finite values compare exactly when both are rational, else with the absolute
    tolerance of :func:`~qpresheaf.config.get_tolerances`.
    """

    __slots__ = ('tag', 'value')

    tag: Tag
    value: Number | None

    def __init__(self, tag: Tag, value: Number | None = None) -> None:
        if tag is Tag.FINITE:
            if value is None or (isinstance(value, float) and not math.isfinite(value)):
                raise ValueError(f'finite extended real needs a finite value, got {value!r}')
        elif value is not None:
            raise ValueError('infinite extended reals carry no value')
        object.__setattr__(self, 'tag', tag)
        object.__setattr__(self, 'value', value)

    def __setattr__(self, name: str, value: Any) -> None:
        raise AttributeError('ExtendedReal is immutable')

    @classmethod
    def finite(cls, value: Number) -> ExtendedReal:
        return cls(Tag.FINITE, value)

    @classmethod
    def coerce(cls, value: ExtendedReal | Number | str) -> ExtendedReal:
        """Build from a number, ``float('inf')`` or the strings ``'-inf'``/``'inf'``."""
        if isinstance(value, ExtendedReal):
            return value
        if isinstance(value, str):
            text = value.strip().lower()
            if text in ('-inf', '-infinity'):
                return NEG_INF
            if text in ('inf', '+inf', 'infinity'):
                return POS_INF
            return cls.finite(as_exact(float(text)))
        if isinstance(value, float) and math.isinf(value):
            return POS_INF if value > 0 else NEG_INF
        if isinstance(value, float) and math.isnan(value):
            raise ValueError('NaN is not an extended real')
        return cls.finite(value)

    @property
    def is_finite(self) -> bool:
        return self.tag is Tag.FINITE

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExtendedReal):
            return NotImplemented
        if self.tag is not other.tag:
            return False
        if self.tag is not Tag.FINITE:
            return True
        assert self.value is not None and other.value is not None
        return values_close(self.value, other.value)

    def __lt__(self, other: ExtendedReal) -> bool:
        if not isinstance(other, ExtendedReal):
            return NotImplemented
        if self.tag is not other.tag:
            return self.tag < other.tag
        if self.tag is not Tag.FINITE or self == other:
            return False
        assert self.value is not None and other.value is not None
        return self.value < other.value

    def __hash__(self) -> int:
        return hash(self.tag)

    def __float__(self) -> float:
        if self.tag is Tag.NEG_INF:
            return -math.inf
        if self.tag is Tag.POS_INF:
            return math.inf
        return float(self.value)  # type: ignore[arg-type]

    def __repr__(self) -> str:
        if self.tag is Tag.NEG_INF:
            return 'ExtendedReal(-inf)'
        if self.tag is Tag.POS_INF:
            return 'ExtendedReal(inf)'
        return f'ExtendedReal({self.value!r})'

    def __str__(self) -> str:
        if self.tag is Tag.NEG_INF:
            return '-inf'
        if self.tag is Tag.POS_INF:
            return 'inf'
        return str(self.value)


NEG_INF = ExtendedReal(Tag.NEG_INF)
POS_INF = ExtendedReal(Tag.POS_INF)


class Lattice(Protocol[T]):
    """What the adjoint computations need from a (complete, finite) lattice."""

    @property
    def top(self) -> T: ...

    @property
    def bottom(self) -> T: ...

    def leq(self, a: T, b: T) -> bool: ...

    def meet(self, items: Iterable[T]) -> T: ...

    def join(self, items: Iterable[T]) -> T: ...


def lattice_eq(lattice: Lattice[T], a: T, b: T) -> bool:
    return lattice.leq(a, b) and lattice.leq(b, a)


class ExtendedRealLine:
    """The chain of extended reals; meets are minima, joins are maxima."""

    top = POS_INF
    bottom = NEG_INF

    def leq(self, a: ExtendedReal, b: ExtendedReal) -> bool:
        return a <= b

    def meet(self, items: Iterable[ExtendedReal]) -> ExtendedReal:
        return min(items, default=POS_INF)

    def join(self, items: Iterable[ExtendedReal]) -> ExtendedReal:
        return max(items, default=NEG_INF)

    def __repr__(self) -> str:
        return 'EXTENDED_REALS'


class UnitInterval:
    """The chain ``[0, 1]`` of probabilities."""

    top: Number = 1
    bottom: Number = 0

    def leq(self, a: Number, b: Number) -> bool:
        return a <= b or values_close(a, b)

    def meet(self, items: Iterable[Number]) -> Number:
        return min(items, default=1)

    def join(self, items: Iterable[Number]) -> Number:
        return max(items, default=0)

    def __repr__(self) -> str:
        return 'UNIT_INTERVAL'


EXTENDED_REALS = ExtendedRealLine()
UNIT_INTERVAL = UnitInterval()


class FiniteLattice(Generic[T]):
    """A finite lattice given by its elements and order relation.

    The relation may be a set of ``(a, b)`` pairs meaning ``a <= b`` or a
    predicate. Lattice axioms (partial order, existence of binary meets and
    joins, top and bottom) are verified at construction.
    """

    def __init__(self, elements: Sequence[T], leq: Callable[[T, T], bool] | Iterable[tuple[T, T]]) -> None:
        self.elements: tuple[T, ...] = tuple(elements)
        if not self.elements:
            raise ValueError('a lattice needs at least one element')
        self._index = {element: position for position, element in enumerate(self.elements)}
        if len(self._index) != len(self.elements):
            raise ValueError('lattice elements must be distinct')
        size = len(self.elements)
        order = np.zeros((size, size), dtype=bool)
        if callable(leq):
            for i, a in enumerate(self.elements):
                for j, b in enumerate(self.elements):
                    order[i, j] = bool(leq(a, b))
        else:
            for a, b in leq:
                order[self._index[a], self._index[b]] = True
        self._order = order
        self._validate()
        self._top = self.elements[int(np.flatnonzero(order.all(axis=0))[0])]
        self._bottom = self.elements[int(np.flatnonzero(order.all(axis=1))[0])]

    def _validate(self) -> None:
        order = self._order
        if not order.diagonal().all():
            raise ValueError('order relation is not reflexive')
        if (order & order.T & ~np.eye(len(order), dtype=bool)).any():
            raise ValueError('order relation is not antisymmetric')
        closure = (order.astype(np.int64) @ order.astype(np.int64)) > 0
        if (closure & ~order).any():
            raise ValueError('order relation is not transitive')
        if order.all(axis=0).sum() != 1 or order.all(axis=1).sum() != 1:
            raise ValueError('lattice needs a unique top and bottom')
        for i, j in itertools.combinations(range(len(order)), 2):
            self._meet_index(i, j)
            self._join_index(i, j)

    def _meet_index(self, i: int, j: int) -> int:
        lower = np.flatnonzero(self._order[:, i] & self._order[:, j])
        for candidate in lower:
            if self._order[lower, candidate].all():
                return int(candidate)
        raise ValueError(f'no meet of {self.elements[i]!r} and {self.elements[j]!r}')

    def _join_index(self, i: int, j: int) -> int:
        upper = np.flatnonzero(self._order[i, :] & self._order[j, :])
        for candidate in upper:
            if self._order[candidate, upper].all():
                return int(candidate)
        raise ValueError(f'no join of {self.elements[i]!r} and {self.elements[j]!r}')

    @property
    def top(self) -> T:
        return self._top

    @property
    def bottom(self) -> T:
        return self._bottom

    def __contains__(self, element: object) -> bool:
        return element in self._index

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, a: T, b: T) -> bool:
        return bool(self._order[self._index[a], self._index[b]])

    def meet(self, items: Iterable[T]) -> T:
        index = self._index[self._top]
        for item in items:
            index = self._meet_index(index, self._index[item])
        return self.elements[index]

    def join(self, items: Iterable[T]) -> T:
        index = self._index[self._bottom]
        for item in items:
            index = self._join_index(index, self._index[item])
        return self.elements[index]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return self.elements == other.elements and bool((self._order == other._order).all())

    def __hash__(self) -> int:
        return hash(self.elements)

    def __repr__(self) -> str:
        return f'FiniteLattice({len(self.elements)} elements)'

    @classmethod
    def chain(cls, elements: Sequence[T]) -> FiniteLattice[T]:
        rank = {element: position for position, element in enumerate(elements)}
        return cls(elements, lambda a, b: rank[a] <= rank[b])

    @classmethod
    def powerset(cls, atoms: Sequence[Hashable]) -> FiniteLattice[frozenset[Hashable]]:
        subsets = [frozenset(c) for size in range(len(atoms) + 1) for c in itertools.combinations(atoms, size)]
        return FiniteLattice(subsets, lambda a, b: a <= b)


@dataclasses.dataclass(frozen=True)
class StepMap(Generic[Y]):
    """Right-continuous step map on the extended reals.

    The value is ``below`` on ``[-inf, b0)``, ``values[i]`` on ``[b_i, b_{i+1})``
    and ``at_top`` (default: the last value) at ``+inf``.
    """

    breakpoints: tuple[ExtendedReal, ...]
    values: tuple[Y, ...]
    below: Y
    at_top: Y | None = None

    def __post_init__(self) -> None:
        if len(self.breakpoints) != len(self.values):
            raise ValueError('one value per breakpoint is required')
        if any(not b.is_finite for b in self.breakpoints):
            raise ValueError('breakpoints must be finite')
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError('breakpoints must be strictly ascending')

    def __call__(self, r: ExtendedReal) -> Y:
        if r.tag is Tag.POS_INF:
            if self.at_top is not None:
                return self.at_top
            return self.values[-1] if self.values else self.below
        value = self.below
        for breakpoint, step_value in zip(self.breakpoints, self.values):
            if breakpoint <= r:
                value = step_value
            else:
                break
        return value

    @property
    def support(self) -> tuple[ExtendedReal, ...]:
        return (NEG_INF, *self.breakpoints, POS_INF)


@dataclasses.dataclass(frozen=True, eq=False)
class MonotoneMap(Generic[X, Y]):
    """A monotone map between lattices.

    ``support`` is the finite set of domain points that adjoint scans range
    over: all elements for a finite domain, ``-inf``, the breakpoints and
    ``+inf`` for a step map on the extended reals.
    """

    domain: Lattice[X]
    codomain: Lattice[Y]
    rule: Callable[[X], Y]
    support: tuple[X, ...]
    name: str = ''
    check: bool = True

    def __post_init__(self) -> None:
        if self.check:
            self.check_monotone()

    def __call__(self, x: X) -> Y:
        return self.rule(x)

    def check_monotone(self) -> None:
        if len(self.support) > EXHAUSTIVE_LIMIT:
            logger.debug('monotonicity of %s not checked: %d support points', self.name or 'map', len(self.support))
            return
        images = [self.rule(x) for x in self.support]
        for (a, fa), (b, fb) in itertools.permutations(zip(self.support, images), 2):
            if self.domain.leq(a, b) and not self.codomain.leq(fa, fb):
                raise NotMonotone(f'{self.name or "map"} is not monotone: {a!r} <= {b!r} but {fa!r} > {fb!r}')

    @classmethod
    def from_table(cls, domain: FiniteLattice[X], codomain: Lattice[Y], table: dict[X, Y], name: str = '') -> MonotoneMap[X, Y]:
        missing = [x for x in domain.elements if x not in table]
        if missing:
            raise ValueError(f'table misses domain elements {missing!r}')
        return cls(domain, codomain, table.__getitem__, domain.elements, name)

    @classmethod
    def from_steps(cls, step: StepMap[Y], codomain: Lattice[Y], name: str = '') -> MonotoneMap[ExtendedReal, Y]:
        return MonotoneMap(EXTENDED_REALS, codomain, step, step.support, name)

    @classmethod
    def identity(cls, lattice: FiniteLattice[X]) -> MonotoneMap[X, X]:
        return MonotoneMap(lattice, lattice, lambda x: x, lattice.elements, 'identity')


def _codomain_sample(g: MonotoneMap[X, Y]) -> list[Y]:
    if isinstance(g.codomain, FiniteLattice):
        return list(g.codomain.elements)
    return [*(g(x) for x in g.support), g.codomain.top, g.codomain.bottom]


def check_preservation(g: MonotoneMap[X, Y], kind: Literal['meets', 'joins']) -> bool:
    """Check whether ``g`` preserves all meets (or all joins).

    On a finite domain this is exhaustive: binary meets over every pair and the
    empty meet, which together give every finite meet, plus the threshold test
    below. For step maps on the extended reals the threshold sets
    ``{x : y <= g(x)}`` must all be principal filters, which is exactly the
    existence of a left adjoint.
    """
    domain, codomain = g.domain, g.codomain
    if kind == 'meets':
        if not lattice_eq(codomain, g(domain.top), codomain.top):
            return False
    elif kind == 'joins':
        if not lattice_eq(codomain, g(domain.bottom), codomain.bottom):
            return False
    else:
        raise ValueError(f'unknown preservation kind {kind!r}')

    if isinstance(domain, FiniteLattice) and len(g.support) <= EXHAUSTIVE_LIMIT:
        for a, b in itertools.combinations(g.support, 2):
            if kind == 'meets':
                lhs, rhs = g(domain.meet((a, b))), codomain.meet((g(a), g(b)))
            else:
                lhs, rhs = g(domain.join((a, b))), codomain.join((g(a), g(b)))
            if not lattice_eq(codomain, lhs, rhs):
                logger.debug('%s fails on %r, %r: %r != %r', kind, a, b, lhs, rhs)
                return False

    for y in _codomain_sample(g):
        if kind == 'meets':
            upper = [x for x in g.support if codomain.leq(y, g(x))]
            if not codomain.leq(y, g(domain.meet(upper))):
                return False
        else:
            lower = [x for x in g.support if codomain.leq(g(x), y)]
            if not codomain.leq(g(domain.join(lower)), y):
                return False
    return True


def left_adjoint(g: MonotoneMap[X, Y], y: Y, validate: bool = True) -> X:
    """Return ``meet{x : y <= g(x)}``, the left adjoint of ``g`` evaluated at ``y``."""
    if validate and not check_preservation(g, 'meets'):
        raise NotMeetPreserving(f'{g.name or "map"} does not preserve meets, so it has no left adjoint')
    return g.domain.meet(x for x in g.support if g.codomain.leq(y, g(x)))


def right_adjoint(f: MonotoneMap[X, Y], x: Y, validate: bool = True) -> X:
    """Return ``join{y : f(y) <= x}``, the right adjoint of a join-preserving ``f``."""
    if validate and not check_preservation(f, 'joins'):
        raise NotMeetPreserving(f'{f.name or "map"} does not preserve joins, so it has no right adjoint')
    return f.domain.join(y for y in f.support if f.codomain.leq(f(y), x))


def left_adjoint_map(g: MonotoneMap[X, Y], support: Sequence[Y] | None = None, validate: bool = True) -> MonotoneMap[Y, X]:
    """Package the left adjoint of ``g`` as a :class:`MonotoneMap`."""
    if validate and not check_preservation(g, 'meets'):
        raise NotMeetPreserving(f'{g.name or "map"} does not preserve meets, so it has no left adjoint')
    points = tuple(support) if support is not None else tuple(_codomain_sample(g))
    return MonotoneMap(g.codomain, g.domain, lambda y: left_adjoint(g, y, validate=False), points, f'left adjoint of {g.name}')


@dataclasses.dataclass(frozen=True)
class GaloisViolation(Generic[X, Y]):
    x: X
    y: Y
    left_side: bool
    right_side: bool


@dataclasses.dataclass(frozen=True)
class GaloisReport(Generic[X, Y]):
    checked: int
    violations: tuple[GaloisViolation[X, Y], ...]

    @property
    def passed(self) -> bool:
        return not self.violations


def verify_galois_pair(
    f: MonotoneMap[Y, X],
    g: MonotoneMap[X, Y],
    samples: Iterable[tuple[X, Y]] | None = None,
) -> GaloisReport[X, Y]:
    """Check ``f(y) <= x  <=>  y <= g(x)`` on sampled pairs ``(x, y)``.

    ``f`` goes from M to L and ``g`` from L to M. Without explicit samples all
    pairs of support points are used.
    """
    if f.domain != g.codomain or f.codomain != g.domain:
        raise DomainMismatch(f'{f.name or "f"} and {g.name or "g"} do not run between the same lattices')
    pairs = samples if samples is not None else itertools.product(g.support, f.support)
    lattice_l, lattice_m = g.domain, f.domain
    violations = []
    checked = 0
    for x, y in pairs:
        checked += 1
        left = lattice_l.leq(f(y), x)
        right = lattice_m.leq(y, g(x))
        if left != right:
            violations.append(GaloisViolation(x, y, left, right))
    return GaloisReport(checked, tuple(violations))


@dataclasses.dataclass(frozen=True, eq=False)
class LatticeCDF(Generic[T]):
    """The L-valued CDF ``r -> m([-inf, r])`` of an L-valued measure, with its L-quantile.

    ``down_set`` evaluates the measure on ``[-inf, r]``; the CDF is constant
    between ``breakpoints`` and right-continuous, so the quantile (its left
    adjoint) is a scan over ``-inf``, the breakpoints and ``+inf``.
    """

    lattice: Lattice[T]
    down_set: Callable[[ExtendedReal], T]
    breakpoints: tuple[ExtendedReal, ...]
    name: str = ''

    def __call__(self, r: ExtendedReal | Number) -> T:
        return self.down_set(ExtendedReal.coerce(r))

    @property
    def support(self) -> tuple[ExtendedReal, ...]:
        return (NEG_INF, *self.breakpoints, POS_INF)

    def quantile(self, x: T) -> ExtendedReal:
        for r in self.support:
            if self.lattice.leq(x, self(r)):
                return r
        return POS_INF

    def as_map(self) -> MonotoneMap[ExtendedReal, T]:
        return MonotoneMap(EXTENDED_REALS, self.lattice, self.down_set, self.support, self.name, check=False)


__all__ = (
    'EXTENDED_REALS',
    'NEG_INF',
    'POS_INF',
    'UNIT_INTERVAL',
    'ExtendedReal',
    'ExtendedRealLine',
    'FiniteLattice',
    'GaloisReport',
    'GaloisViolation',
    'Lattice',
    'LatticeCDF',
    'MonotoneMap',
    'StepMap',
    'Tag',
    'UnitInterval',
    'as_exact',
    'check_preservation',
    'lattice_eq',
    'left_adjoint',
    'left_adjoint_map',
    'right_adjoint',
    'values_close',
    'verify_galois_pair',
)
