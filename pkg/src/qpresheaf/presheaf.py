"""The spectral presheaf over a finite context poset.

A clopen subobject picks a set of blocks in every context such that the
restriction of a picked block is picked again below. Spectra are finite and
discrete, so every subset is clopen and the lattice operations are
componentwise. Outer daseinisation approximates a projection from above in
each context; composed with a spectral family it gives the presheaf CDF,
and a state turns subobjects into antitone functions on the poset whose
minimum is the Born probability.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import logging
from collections.abc import Iterable, Iterator, Sequence

from qpresheaf.config import get_tolerances
from qpresheaf.contexts import Context, ContextPoset
from qpresheaf.errors import DimMismatch, DomainMismatch, MissingOperatorContext, NotASubobject, NotMonotone, OutOfRange
from qpresheaf.linop_core import HermitianOperator, Projection, proj_eq
from qpresheaf.order_core import NEG_INF, POS_INF, ExtendedReal, LatticeCDF, Number
from qpresheaf.quantum_prob import DensityState, mu_rho
from qpresheaf.spectral import BorelSet, SpectralFamily, spectral_family_of, spectral_measure

logger = logging.getLogger(__name__)

Blocks = frozenset[int]

ENUMERATION_LIMIT = 16


def _restricted(poset: ContextPoset, big: int, small: int, blocks: Iterable[int]) -> Blocks:
    mapping = poset.restriction(big, small)
    return frozenset(mapping[i] for i in blocks)


def _violations(poset: ContextPoset, components: Sequence[Blocks]) -> Iterator[tuple[int, int]]:
    for small, big in poset.inclusion_edges:
        if not _restricted(poset, big, small, components[big]) <= components[small]:
            yield small, big


class ClopenSubobject:
    """A compatible family of block sets, one per context of a poset."""

    __slots__ = ('poset', 'components')

    def __init__(self, poset: ContextPoset, components: Sequence[Iterable[int]]) -> None:
        components = tuple(frozenset(c) for c in components)
        if len(components) != len(poset):
            raise NotASubobject(f'expected {len(poset)} components, got {len(components)}', 'one component per context')
        for index, (context, blocks) in enumerate(zip(poset, components)):
            if any(not 0 <= b < len(context) for b in blocks):
                raise NotASubobject(f'component {index} names blocks outside its context', 'block indices')
        broken = next(_violations(poset, components), None)
        if broken is not None:
            small, big = broken
            raise NotASubobject(f'restriction from context {big} to context {small} leaves the subobject', 'restriction-closed')
        self.poset = poset
        self.components = components

    @classmethod
    def top(cls, poset: ContextPoset) -> ClopenSubobject:
        return cls(poset, [range(len(context)) for context in poset])

    @classmethod
    def bottom(cls, poset: ContextPoset) -> ClopenSubobject:
        return cls(poset, [()] * len(poset))

    @classmethod
    def from_projections(cls, poset: ContextPoset, projections: Sequence[Projection]) -> ClopenSubobject:
        """Build from one projection per context; each must be a block sum of its context."""
        components = []
        for index, (context, projection) in enumerate(zip(poset, projections)):
            blocks = context.outer_blocks(projection)
            if not proj_eq(context.block_sum(blocks), projection):
                raise NotASubobject(f'projection {index} is not a block sum of its context', 'block sum')
            components.append(blocks)
        return cls(poset, components)

    def projection(self, index: int) -> Projection:
        return self.poset[index].block_sum(self.components[index])

    def projections(self) -> tuple[Projection, ...]:
        return tuple(self.projection(i) for i in range(len(self.poset)))

    @property
    def is_empty(self) -> bool:
        return not any(self.components)

    @property
    def is_top(self) -> bool:
        return all(len(c) == len(context) for c, context in zip(self.components, self.poset))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ClopenSubobject):
            return NotImplemented
        return self.poset is other.poset and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def __le__(self, other: ClopenSubobject) -> bool:
        return subobject_leq(self, other)

    def __and__(self, other: ClopenSubobject) -> ClopenSubobject:
        return subobject_meet(self, other)

    def __or__(self, other: ClopenSubobject) -> ClopenSubobject:
        return subobject_join(self, other)

    def __repr__(self) -> str:
        parts = ', '.join('{' + ','.join(str(b) for b in sorted(c)) + '}' for c in self.components)
        return f'ClopenSubobject({parts})'


def _same_poset(s: ClopenSubobject, t: ClopenSubobject) -> ContextPoset:
    if s.poset is not t.poset:
        raise DomainMismatch('subobjects live over different context posets')
    return s.poset


def subobject_leq(s: ClopenSubobject, t: ClopenSubobject) -> bool:
    _same_poset(s, t)
    return all(a <= b for a, b in zip(s.components, t.components))


def subobject_meet(s: ClopenSubobject, t: ClopenSubobject) -> ClopenSubobject:
    """Componentwise intersection, validated as a subobject."""
    poset = _same_poset(s, t)
    return ClopenSubobject(poset, [a & b for a, b in zip(s.components, t.components)])


def subobject_join(s: ClopenSubobject, t: ClopenSubobject) -> ClopenSubobject:
    poset = _same_poset(s, t)
    return ClopenSubobject(poset, [a | b for a, b in zip(s.components, t.components)])


def _bottom_up(poset: ContextPoset) -> list[int]:
    return sorted(range(len(poset)), key=lambda i: len(poset.below(i)))


def largest_subobject_below(poset: ContextPoset, components: Sequence[Iterable[int]]) -> ClopenSubobject:
    """The largest subobject contained componentwise in ``components``."""
    wanted = [frozenset(c) for c in components]
    kept: dict[int, Blocks] = {}
    for index in _bottom_up(poset):
        lower = [j for j in poset.below(index) if j != index]
        kept[index] = frozenset(
            b for b in wanted[index] if all(poset.restriction(index, j)[b] in kept[j] for j in lower)
        )
    return ClopenSubobject(poset, [kept[i] for i in range(len(poset))])


def heyting_neg(s: ClopenSubobject) -> ClopenSubobject:
    """Pseudo-complement: blocks none of whose restrictions lie in ``s``."""
    poset = s.poset
    components = []
    for index, context in enumerate(poset):
        components.append(
            frozenset(
                b
                for b in range(len(context))
                if all(poset.restriction(index, j)[b] not in s.components[j] for j in poset.below(index))
            )
        )
    return ClopenSubobject(poset, components)


def coheyting_neg(s: ClopenSubobject) -> ClopenSubobject:
    """Co-Heyting complement: restrictions of the componentwise complements from above."""
    poset = s.poset
    components = []
    for index in range(len(poset)):
        blocks: set[int] = set()
        for big in poset.above(index):
            complement = set(range(len(poset[big]))) - s.components[big]
            blocks.update(_restricted(poset, big, index, complement))
        components.append(frozenset(blocks))
    return ClopenSubobject(poset, components)


def heyting_witness() -> tuple[ContextPoset, ClopenSubobject]:
    """The dimension-three poset ``{Vd > Vc}`` with a subobject whose negations are strict.

    ``s = ({0}, {0, 1})`` has an empty Heyting complement although ``s`` is
    not the top, and a co-Heyting complement ``({1, 2}, {1})`` that overlaps it.
    """
    diagonal = Context([Projection.diag([1, 0, 0]), Projection.diag([0, 1, 0]), Projection.diag([0, 0, 1])], 'Vd')
    coarse = Context([Projection.diag([1, 0, 0]), Projection.diag([0, 1, 1])], 'Vc')
    poset = ContextPoset([diagonal, coarse])
    return poset, ClopenSubobject(poset, [{0}, {0, 1}])


def enumerate_subobjects(poset: ContextPoset) -> Iterator[ClopenSubobject]:
    """Every clopen subobject of a small poset, by backtracking in bottom-up order."""
    total = sum(len(context) for context in poset)
    if total > ENUMERATION_LIMIT:
        raise ValueError(f'{total} blocks in total is too many to enumerate (limit {ENUMERATION_LIMIT})')
    order = _bottom_up(poset)

    def subsets(size: int) -> Iterator[Blocks]:
        for k in range(size + 1):
            for combination in itertools.combinations(range(size), k):
                yield frozenset(combination)

    def extend(position: int, chosen: dict[int, Blocks]) -> Iterator[dict[int, Blocks]]:
        if position == len(order):
            yield chosen
            return
        index = order[position]
        lower = [j for j in poset.below(index) if j != index]
        for blocks in subsets(len(poset[index])):
            if all(_restricted(poset, index, j, blocks) <= chosen[j] for j in lower):
                yield from extend(position + 1, {**chosen, index: blocks})

    for chosen in extend(0, {}):
        yield ClopenSubobject(poset, [chosen[i] for i in range(len(poset))])


class SubobjectLattice:
    """Sub_cl of the spectral presheaf over a finite poset."""

    def __init__(self, poset: ContextPoset) -> None:
        self.poset = poset

    @property
    def top(self) -> ClopenSubobject:
        return ClopenSubobject.top(self.poset)

    @property
    def bottom(self) -> ClopenSubobject:
        return ClopenSubobject.bottom(self.poset)

    def leq(self, a: ClopenSubobject, b: ClopenSubobject) -> bool:
        return subobject_leq(a, b)

    def meet(self, items: Iterable[ClopenSubobject]) -> ClopenSubobject:
        return functools.reduce(subobject_meet, items, self.top)

    def join(self, items: Iterable[ClopenSubobject]) -> ClopenSubobject:
        return functools.reduce(subobject_join, items, self.bottom)

    def elements(self) -> tuple[ClopenSubobject, ...]:
        return tuple(enumerate_subobjects(self.poset))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SubobjectLattice) and other.poset is self.poset

    def __hash__(self) -> int:
        return id(self.poset)


def daseinise_to_context(p: Projection, context: Context) -> Projection:
    """The smallest projection of ``context`` above ``p``."""
    if p.dim != context.dim:
        raise DimMismatch(f'projection of dim {p.dim} against a context of dim {context.dim}')
    return context.block_sum(context.outer_blocks(p))


def daseinise(p: Projection, poset: ContextPoset) -> ClopenSubobject:
    """Outer daseinisation of ``p`` over every context of ``poset``."""
    if p.dim != poset.dim:
        raise DimMismatch(f'projection of dim {p.dim} against a poset of dim {poset.dim}')
    return ClopenSubobject(poset, [context.outer_blocks(p) for context in poset])


@dataclasses.dataclass(frozen=True)
class InjectivityCheck:
    holds: bool | None
    note: str = ''


def daseinisation_injective(p: Projection, q: Projection, poset: ContextPoset) -> InjectivityCheck:
    """Check ``daseinise(p) == daseinise(q)`` only when ``p == q``.

    Meaningful only when some context contains ``p`` and some context contains
    ``q``; otherwise the check is skipped with a note.
    """
    if not any(c.is_block_sum(p) for c in poset) or not any(c.is_block_sum(q) for c in poset):
        return InjectivityCheck(None, 'skipped: the poset lacks a context containing one of the projections')
    same_image = daseinise(p, poset) == daseinise(q, poset)
    return InjectivityCheck(same_image == proj_eq(p, q))


@dataclasses.dataclass(frozen=True, eq=False)
class AntitoneFunction:
    """A value in ``[0, 1]`` per context, order-reversing along inclusion."""

    poset: ContextPoset
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.values) != len(self.poset):
            raise ValueError(f'expected {len(self.poset)} values, got {len(self.values)}')
        tol = get_tolerances().tol
        for small, big in self.poset.inclusion_edges:
            if self.values[small] < self.values[big] - tol:
                raise NotMonotone(f'value at context {small} is below the value at the larger context {big}', 'antitone')

    def __getitem__(self, index: int) -> float:
        return self.values[index]

    @property
    def minimum(self) -> float:
        return min(self.values)

    def argmin(self, tol: float | None = None) -> tuple[int, ...]:
        tol = get_tolerances().tol if tol is None else tol
        low = self.minimum
        return tuple(i for i, v in enumerate(self.values) if v <= low + tol)


@dataclasses.dataclass(frozen=True, eq=False)
class MeasureOnSig:
    """The probability measure on the spectral presheaf induced by a state."""

    state: DensityState
    poset: ContextPoset

    def __post_init__(self) -> None:
        if self.state.dim != self.poset.dim:
            raise DimMismatch(f'state of dim {self.state.dim} against a poset of dim {self.poset.dim}')

    def __call__(self, s: ClopenSubobject) -> AntitoneFunction:
        if s.poset is not self.poset:
            raise DomainMismatch('subobject and measure live over different context posets')
        return AntitoneFunction(self.poset, tuple(mu_rho(self.state, q) for q in s.projections()))


def measure_from_state(rho: DensityState, poset: ContextPoset) -> MeasureOnSig:
    return MeasureOnSig(rho, poset)


def measure_on_sig(rho: DensityState, poset: ContextPoset, s: ClopenSubobject) -> AntitoneFunction:
    return MeasureOnSig(rho, poset)(s)


def convex_combine(first: MeasureOnSig, second: MeasureOnSig, c: Number) -> MeasureOnSig:
    """The measure of the state ``c * rho1 + (1 - c) * rho2``."""
    if first.poset is not second.poset:
        raise DomainMismatch('measures live over different context posets')
    if not 0 <= c <= 1:
        raise OutOfRange(f'convex weight must lie in [0, 1], got {c!r}')
    weight = float(c)
    state = DensityState(weight * first.state.matrix + (1 - weight) * second.state.matrix)
    return MeasureOnSig(state, first.poset)


def _warn_without_operator_context(a: HermitianOperator, poset: ContextPoset) -> None:
    if not poset.contexts_containing(a):
        logger.warning('no context of the poset contains the operator; presheaf quantiles may undershoot')


class PresheafCDF:
    """``r -> daseinise(E^A_r)`` with its quantile, the left adjoint."""

    def __init__(self, a: HermitianOperator, poset: ContextPoset) -> None:
        if a.dim != poset.dim:
            raise DimMismatch(f'operator of dim {a.dim} against a poset of dim {poset.dim}')
        _warn_without_operator_context(a, poset)
        self.operator = a
        self.poset = poset
        self.family: SpectralFamily = spectral_family_of(a)
        self.lattice = SubobjectLattice(poset)
        self._cdf = LatticeCDF(self.lattice, self._down_set, self.family.extended_breakpoints, 'presheaf cdf')

    def _down_set(self, r: ExtendedReal) -> ClopenSubobject:
        return daseinise(self.family(r), self.poset)

    def __call__(self, r: ExtendedReal | Number) -> ClopenSubobject:
        return self._cdf(r)

    @property
    def support(self) -> tuple[ExtendedReal, ...]:
        return self._cdf.support

    def quantile(self, s: ClopenSubobject) -> ExtendedReal:
        if s.is_empty:
            return NEG_INF
        return self._cdf.quantile(s)

    def as_cdf(self) -> LatticeCDF[ClopenSubobject]:
        return self._cdf


def presheaf_cdf(a: HermitianOperator, poset: ContextPoset, r: ExtendedReal | Number) -> ClopenSubobject:
    return PresheafCDF(a, poset)(r)


def presheaf_quantile(a: HermitianOperator, poset: ContextPoset, s: ClopenSubobject) -> ExtendedReal:
    return PresheafCDF(a, poset).quantile(s)


def _require_operator_context(a: HermitianOperator, poset: ContextPoset) -> tuple[int, ...]:
    containing = poset.contexts_containing(a)
    if not containing:
        raise MissingOperatorContext('no context of the poset contains the operator', 'operator context')
    return containing


@dataclasses.dataclass(frozen=True, eq=False)
class BornReport:
    per_context: AntitoneFunction
    minimum: float
    argmin: tuple[int, ...]
    born: float
    operator_contexts: tuple[int, ...]

    @property
    def attained(self) -> bool:
        """Whether the minimum is the Born probability and every operator context attains it."""
        tol = get_tolerances().tol
        return abs(self.minimum - self.born) <= tol and set(self.operator_contexts) <= set(self.argmin)


def born_report(rho: DensityState, a: HermitianOperator, delta: BorelSet, poset: ContextPoset) -> BornReport:
    containing = _require_operator_context(a, poset)
    projection = spectral_measure(a, delta)
    per_context = measure_on_sig(rho, poset, daseinise(projection, poset))
    born = mu_rho(rho, projection)
    report = BornReport(per_context, per_context.minimum, per_context.argmin(), born, containing)
    logger.debug('born report: minimum %.12g against tr(rho e) %.12g', report.minimum, born)
    return report


def breve_cdf(rho: DensityState, a: HermitianOperator, poset: ContextPoset, r: ExtendedReal | Number) -> float:
    """The minimum over contexts of the measure of ``daseinise(E^A_r)``."""
    _require_operator_context(a, poset)
    return measure_on_sig(rho, poset, PresheafCDF(a, poset)(r)).minimum


def breve_quantile(rho: DensityState, a: HermitianOperator, poset: ContextPoset, s: Number) -> ExtendedReal:
    if not 0 <= s <= 1:
        raise OutOfRange(f's must lie in [0, 1], got {s!r}')
    _require_operator_context(a, poset)
    cdf = PresheafCDF(a, poset)
    measure = MeasureOnSig(rho, poset)
    tol = get_tolerances().tol
    for r in cdf.support:
        if float(s) <= measure(cdf(r)).minimum + tol:
            return r
    return POS_INF


def global_section_search(poset: ContextPoset, limit: int | None = None) -> list[tuple[int, ...]]:
    """Choices of one block per context that are compatible with every restriction."""
    order = _bottom_up(poset)[::-1]
    sections: list[tuple[int, ...]] = []

    def consistent(index: int, block: int, chosen: dict[int, int]) -> bool:
        for other, value in chosen.items():
            if poset.leq(other, index) and poset.restriction(index, other)[block] != value:
                return False
            if poset.leq(index, other) and poset.restriction(other, index)[value] != block:
                return False
        return True

    def search(position: int, chosen: dict[int, int]) -> bool:
        if position == len(order):
            sections.append(tuple(chosen[i] for i in range(len(poset))))
            return limit is not None and len(sections) >= limit
        index = order[position]
        for block in range(len(poset[index])):
            if consistent(index, block, chosen):
                if search(position + 1, {**chosen, index: block}):
                    return True
        return False

    search(0, {})
    logger.info('found %d global sections over %d contexts', len(sections), len(poset))
    return sections


__all__ = (
    'AntitoneFunction',
    'BornReport',
    'ClopenSubobject',
    'InjectivityCheck',
    'MeasureOnSig',
    'PresheafCDF',
    'SubobjectLattice',
    'born_report',
    'breve_cdf',
    'breve_quantile',
    'coheyting_neg',
    'convex_combine',
    'daseinisation_injective',
    'daseinise',
    'daseinise_to_context',
    'enumerate_subobjects',
    'global_section_search',
    'heyting_neg',
    'heyting_witness',
    'largest_subobject_below',
    'measure_from_state',
    'measure_on_sig',
    'presheaf_cdf',
    'presheaf_quantile',
    'subobject_join',
    'subobject_leq',
    'subobject_meet',
)
