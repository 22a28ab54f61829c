"""Finite context posets.

A context is a non-trivial abelian subalgebra of the matrix algebra, stored
as the orthogonal partition of unity given by its minimal projections. Its
Gelfand spectrum is the set of those blocks, so a :class:`Character` is a
block index. ``V' <= V`` holds when every block of ``V'`` is a sum of blocks
of ``V``; restriction then sends a block of ``V`` to the unique block of
``V'`` containing it.
"""

from __future__ import annotations

import dataclasses
import functools
import itertools
import logging
from collections.abc import Iterator, Sequence
from typing import Literal

import numpy as np
import scipy.sparse
import scipy.sparse.csgraph

from qpresheaf.config import get_tolerances
from qpresheaf.errors import DimMismatch, InvalidContext, NonCommuting, NotIncluded
from qpresheaf.linop_core import (
    HermitianOperator,
    Projection,
    clean_projection,
    commutator_norm,
    eig_hermitian,
    proj_eq,
    proj_leq,
    range_basis,
)

logger = logging.getLogger(__name__)

ClosePolicy = Literal['coarsenings', 'intersections', 'none']

MAX_COARSENING_BLOCKS = 8


def _overlaps(p: Projection, q: Projection) -> bool:
    return float(np.linalg.norm(p.matrix @ q.matrix, 2)) > get_tolerances().tol


def _block_sum(blocks: Sequence[Projection], indices: Sequence[int], dim: int) -> Projection:
    total = np.zeros((dim, dim), dtype=np.complex128)
    for index in indices:
        total = total + blocks[index].matrix
    return clean_projection(total)


class Context:
    """An orthogonal partition of unity into at least two non-zero blocks."""

    def __init__(self, blocks: Sequence[Projection], label: str = '') -> None:
        blocks = tuple(blocks)
        if len(blocks) < 2:
            raise InvalidContext(f'a context needs at least two blocks, got {len(blocks)}', 'non-trivial')
        dims = {b.dim for b in blocks}
        if len(dims) != 1:
            raise DimMismatch(f'context blocks of different dimensions: {sorted(dims)}')
        tol = get_tolerances().tol
        for i, block in enumerate(blocks):
            if block.is_zero():
                raise InvalidContext(f'block {i} is zero', 'non-zero blocks')
        for i, j in itertools.combinations(range(len(blocks)), 2):
            if float(np.max(np.abs(blocks[i].matrix @ blocks[j].matrix))) > tol:
                raise InvalidContext(f'blocks {i} and {j} are not orthogonal', 'orthogonal')
        dim = dims.pop()
        total = sum((b.matrix for b in blocks), np.zeros((dim, dim), dtype=np.complex128))
        if float(np.max(np.abs(total - np.eye(dim)))) > tol:
            raise InvalidContext('blocks do not sum to the identity', 'partition of unity')
        self.blocks = blocks
        self.label = label
        self.dim = dim

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[Projection]:
        return iter(self.blocks)

    def __repr__(self) -> str:
        name = self.label or 'Context'
        return f'<{name}: {len(self.blocks)} blocks, dim {self.dim}>'

    def outer_blocks(self, p: Projection) -> frozenset[int]:
        """Indices of the blocks not orthogonal to ``p``."""
        if p.dim != self.dim:
            raise DimMismatch(f'projection of dim {p.dim} against a context of dim {self.dim}')
        return frozenset(i for i, block in enumerate(self.blocks) if _overlaps(block, p))

    def block_sum(self, indices: Sequence[int] | frozenset[int]) -> Projection:
        return _block_sum(self.blocks, sorted(indices), self.dim)

    def is_block_sum(self, p: Projection) -> bool:
        return proj_eq(self.block_sum(self.outer_blocks(p)), p)

    def same_as(self, other: Context) -> bool:
        """Equal block sets up to reordering."""
        if self.dim != other.dim or len(self) != len(other):
            return False
        tol = get_tolerances().reconstruct_tol
        return all(any(proj_eq(p, q, tol) for q in other.blocks) for p in self.blocks)

    def includes(self, other: Context) -> bool:
        """``other <= self``: every block of ``other`` is a sum of blocks of ``self``."""
        if self.dim != other.dim:
            raise DimMismatch(f'contexts of dims {self.dim} and {other.dim}')
        return all(self.is_block_sum(q) for q in other.blocks)

    def restriction_to(self, other: Context) -> tuple[int, ...]:
        """For each block of ``self`` the index of the block of ``other`` above it."""
        result = []
        for i, block in enumerate(self.blocks):
            above = [j for j, q in enumerate(other.blocks) if proj_leq(block, q)]
            if len(above) != 1:
                raise NotIncluded(f'block {i} of {self!r} lies under no single block of {other!r}')
            result.append(above[0])
        return tuple(result)


@dataclasses.dataclass(frozen=True)
class Character:
    """A point of the Gelfand spectrum: one block of a context."""

    context: Context
    index: int

    def __post_init__(self) -> None:
        if not 0 <= self.index < len(self.context):
            raise IndexError(f'character index {self.index} out of range for {self.context!r}')

    @property
    def projection(self) -> Projection:
        return self.context.blocks[self.index]

    def value(self, a: HermitianOperator) -> float:
        """The eigenvalue of ``a`` on this block, when ``a`` lies in the context."""
        p = self.projection
        return float(np.trace(a.matrix @ p.matrix).real) / p.rank


def restrict_character(character: Character, target: Context) -> Character:
    if not character.context.includes(target):
        raise NotIncluded(f'{target!r} is not contained in {character.context!r}')
    for j, block in enumerate(target.blocks):
        if proj_leq(character.projection, block):
            return Character(target, j)
    raise NotIncluded(f'no block of {target!r} dominates the character')


class ContextPoset:
    """A finite set of contexts ordered by inclusion, with restriction index maps."""

    def __init__(self, contexts: Sequence[Context]) -> None:
        contexts = tuple(contexts)
        if not contexts:
            raise ValueError('a context poset needs at least one context')
        dims = {c.dim for c in contexts}
        if len(dims) != 1:
            raise DimMismatch(f'contexts of different dimensions: {sorted(dims)}')
        self.contexts = contexts
        self.dim = dims.pop()
        size = len(contexts)
        self._leq = np.zeros((size, size), dtype=bool)
        self._restrictions: dict[tuple[int, int], tuple[int, ...]] = {}
        for big, small in itertools.product(range(size), repeat=2):
            if big == small:
                self._leq[small, big] = True
                self._restrictions[big, small] = tuple(range(len(contexts[big])))
            elif contexts[big].includes(contexts[small]):
                self._leq[small, big] = True
                self._restrictions[big, small] = contexts[big].restriction_to(contexts[small])
        for i, j in itertools.combinations(range(size), 2):
            if self._leq[i, j] and self._leq[j, i]:
                raise InvalidContext(f'contexts {i} and {j} coincide', 'antisymmetric')
        logger.debug('context poset with %d contexts and %d strict inclusions', size, len(self.inclusion_edges))

    def __len__(self) -> int:
        return len(self.contexts)

    def __iter__(self) -> Iterator[Context]:
        return iter(self.contexts)

    def __getitem__(self, index: int) -> Context:
        return self.contexts[index]

    def leq(self, small: int, big: int) -> bool:
        return bool(self._leq[small, big])

    def below(self, index: int) -> tuple[int, ...]:
        """Indices ``j`` with ``V_j <= V_index`` (including ``index``)."""
        return tuple(int(j) for j in np.flatnonzero(self._leq[:, index]))

    def above(self, index: int) -> tuple[int, ...]:
        return tuple(int(j) for j in np.flatnonzero(self._leq[index, :]))

    def restriction(self, big: int, small: int) -> tuple[int, ...]:
        try:
            return self._restrictions[big, small]
        except KeyError:
            raise NotIncluded(f'context {small} is not contained in context {big}') from None

    @functools.cached_property
    def labels(self) -> tuple[str, ...]:
        """Context labels, made unique by falling back to ``V<index>``."""
        counts: dict[str, int] = {}
        for context in self.contexts:
            counts[context.label] = counts.get(context.label, 0) + 1
        return tuple(c.label if c.label and counts[c.label] == 1 else f'V{i}' for i, c in enumerate(self.contexts))

    @functools.cached_property
    def inclusion_edges(self) -> tuple[tuple[int, int], ...]:
        """Strict inclusions as ``(small, big)`` pairs."""
        return tuple((small, big) for big, small in sorted(self._restrictions) if big != small)

    def index_of(self, context: Context) -> int | None:
        for i, member in enumerate(self.contexts):
            if member.same_as(context):
                return i
        return None

    def contexts_containing(self, a: HermitianOperator) -> tuple[int, ...]:
        return tuple(i for i, context in enumerate(self.contexts) if context_contains(context, a))


def _commuting_pairs(operators: Sequence[HermitianOperator]) -> None:
    tol = get_tolerances().tol
    for i, j in itertools.combinations(range(len(operators)), 2):
        norm = commutator_norm(operators[i], operators[j])
        if norm > tol:
            raise NonCommuting(f'operators {i} and {j} do not commute (|[A, B]| = {norm:.3g})', (i, j), norm)


def _refine(block: Projection, a: HermitianOperator) -> list[Projection]:
    basis = range_basis(block)
    restricted = HermitianOperator(basis.conj().T @ a.matrix @ basis, check=False)
    pieces = []
    for projection in eig_hermitian(restricted).eigenprojections:
        pieces.append(clean_projection(basis @ projection.matrix @ basis.conj().T))
    return pieces


def context_from_commuting(operators: Sequence[HermitianOperator], label: str = '') -> Context:
    """Joint eigenspace partition of commuting operators."""
    if not operators:
        raise InvalidContext('no operators given', 'non-trivial')
    operators = [op if isinstance(op, HermitianOperator) else HermitianOperator(op) for op in operators]
    dims = {op.dim for op in operators}
    if len(dims) != 1:
        raise DimMismatch(f'operators of different dimensions: {sorted(dims)}')
    _commuting_pairs(operators)
    blocks = [Projection.identity(operators[0].dim)]
    for operator in operators:
        blocks = [piece for block in blocks for piece in _refine(block, operator)]
    return Context(blocks, label)


def context_of_operator(a: HermitianOperator, label: str = '') -> Context:
    """``V_A``, the algebra generated by ``A`` and the identity."""
    return Context(eig_hermitian(a).eigenprojections, label)


def context_contains(context: Context, a: HermitianOperator) -> bool:
    return all(context.is_block_sum(p) for p in eig_hermitian(a).eigenprojections)


def maximal_context(basis: np.ndarray, label: str = '') -> Context:
    """The maximal abelian subalgebra diagonal in an orthonormal basis (columns)."""
    vectors = np.asarray(basis, dtype=np.complex128)
    return Context([Projection.onto(vectors[:, k]) for k in range(vectors.shape[1])], label)


def common_coarsening(v: Context, w: Context, label: str = '') -> Context | None:
    """Minimal projections of ``V & W``: components of the block-overlap graph.

    Returns ``None`` when the intersection is the trivial algebra.
    """
    if v.dim != w.dim:
        raise DimMismatch(f'contexts of dims {v.dim} and {w.dim}')
    size = len(v) + len(w)
    adjacency = np.zeros((size, size), dtype=bool)
    for i, p in enumerate(v.blocks):
        for j, q in enumerate(w.blocks):
            if _overlaps(p, q):
                adjacency[i, len(v) + j] = True
    count, labels = scipy.sparse.csgraph.connected_components(scipy.sparse.csr_matrix(adjacency), directed=False)
    if count < 2:
        return None
    groups = [[i for i in range(len(v)) if labels[i] == component] for component in range(count)]
    return Context([v.block_sum(group) for group in groups if group], label)


def _set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in _set_partitions(rest):
        for k in range(len(partition)):
            yield [*partition[:k], [first, *partition[k]], *partition[k + 1 :]]
        yield [[first], *partition]


def coarsenings(context: Context) -> Iterator[Context]:
    """Every non-trivial context obtained by merging blocks, the context itself included."""
    if len(context) > MAX_COARSENING_BLOCKS:
        raise ValueError(f'refusing to enumerate coarsenings of {len(context)} blocks (limit {MAX_COARSENING_BLOCKS})')
    for partition in _set_partitions(list(range(len(context)))):
        if len(partition) >= 2:
            yield Context([context.block_sum(group) for group in partition], _partition_label(context, partition))


def _partition_label(context: Context, partition: list[list[int]]) -> str:
    if len(partition) == len(context):
        return context.label
    parts = sorted(''.join(str(i + 1) for i in sorted(group)) for group in partition)
    prefix = f'{context.label}:' if context.label else ''
    return prefix + '|'.join(parts)


def _add_unique(members: list[Context], candidate: Context) -> bool:
    if any(member.same_as(candidate) for member in members):
        return False
    members.append(candidate)
    return True


def poset_build(seeds: Sequence[Context], close_under: ClosePolicy = 'none') -> ContextPoset:
    """Close ``seeds`` under the chosen policy and order the result by inclusion."""
    if not seeds:
        raise ValueError('no seed contexts')
    dims = {seed.dim for seed in seeds}
    if len(dims) != 1:
        raise DimMismatch(f'seed contexts of different dimensions: {sorted(dims)}')
    members: list[Context] = []
    for seed in seeds:
        _add_unique(members, seed)
    if close_under == 'coarsenings':
        for seed in list(members):
            for candidate in coarsenings(seed):
                _add_unique(members, candidate)
    elif close_under == 'intersections':
        changed = True
        while changed:
            changed = False
            for v, w in itertools.combinations(list(members), 2):
                meet = common_coarsening(v, w, f'{v.label}&{w.label}')
                if meet is not None and _add_unique(members, meet):
                    changed = True
    elif close_under != 'none':
        raise ValueError(f'unknown closure policy {close_under!r}')
    logger.info('built context poset of %d contexts from %d seeds (%s)', len(members), len(seeds), close_under)
    return ContextPoset(members)


__all__ = (
    'Character',
    'ClosePolicy',
    'Context',
    'ContextPoset',
    'coarsenings',
    'common_coarsening',
    'context_contains',
    'context_from_commuting',
    'context_of_operator',
    'maximal_context',
    'poset_build',
    'restrict_character',
)
