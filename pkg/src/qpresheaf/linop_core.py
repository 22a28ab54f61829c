"""Finite-dimensional Hermitian operators and the projection lattice P(N).

Meets and joins of projections are computed from a :func:`scipy.linalg.svd`
with an absolute rank threshold (kernel of the stacked ``I - P, I - Q`` for the
meet, image of ``P + Q`` for the join) and cleaned back to exact
idempotents afterwards so that chains of lattice operations do not drift.
"""

from __future__ import annotations

import dataclasses
import functools
import logging
from collections.abc import Iterable, Sequence
from typing import Any

import numpy as np
import numpy.typing as npt
import scipy.linalg

from qpresheaf.config import get_tolerances
from qpresheaf.errors import DimMismatch, NotAProjection, NotHermitian

logger = logging.getLogger(__name__)

Matrix = npt.NDArray[np.complex128]

MAX_DIM = 64


def _as_matrix(entries: Any) -> Matrix:
    array = np.array(entries, dtype=np.complex128)
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] == 0:
        raise NotHermitian(f'expected a non-empty square matrix, got shape {array.shape}', 'square')
    if not np.isfinite(array).all():
        raise NotHermitian('matrix has non-finite entries', 'finite')
    return array


class HermitianOperator:
    """An immutable Hermitian matrix."""

    __slots__ = ('_matrix',)

    def __init__(self, entries: Any, *, check: bool = True) -> None:
        matrix = _as_matrix(entries)
        if check:
            deviation = float(np.max(np.abs(matrix - matrix.conj().T)))
            if deviation > get_tolerances().hermitian_tol * max(1.0, float(np.max(np.abs(matrix)))):
                raise NotHermitian(f'matrix is not Hermitian (max |A - A*| = {deviation:.3g})')
        matrix = (matrix + matrix.conj().T) / 2
        matrix.setflags(write=False)
        self._matrix = matrix

    @property
    def matrix(self) -> Matrix:
        return self._matrix

    @property
    def dim(self) -> int:
        return int(self._matrix.shape[0])

    def norm(self) -> float:
        return float(np.linalg.norm(self._matrix, 2))

    def __add__(self, other: HermitianOperator) -> HermitianOperator:
        _same_dim(self, other)
        return HermitianOperator(self._matrix + other.matrix, check=False)

    def __sub__(self, other: HermitianOperator) -> HermitianOperator:
        _same_dim(self, other)
        return HermitianOperator(self._matrix - other.matrix, check=False)

    def __rmul__(self, scalar: float) -> HermitianOperator:
        return HermitianOperator(float(scalar) * self._matrix, check=False)

    def close_to(self, other: HermitianOperator, tol: float | None = None) -> bool:
        tol = get_tolerances().reconstruct_tol if tol is None else tol
        return self.dim == other.dim and float(np.linalg.norm(self._matrix - other.matrix, 2)) <= tol

    def __repr__(self) -> str:
        return f'{type(self).__name__}(dim={self.dim})'

    @classmethod
    def diag(cls, values: Sequence[float]) -> HermitianOperator:
        return cls(np.diag(np.asarray(values, dtype=np.complex128)))

    @classmethod
    def identity(cls, dim: int) -> HermitianOperator:
        return cls(np.eye(dim))


class Projection(HermitianOperator):
    """An orthogonal projection: Hermitian and idempotent."""

    def __init__(self, entries: Any, *, check: bool = True) -> None:
        super().__init__(entries, check=check)
        if check:
            matrix = self.matrix
            deviation = float(np.max(np.abs(matrix @ matrix - matrix)))
            if deviation > get_tolerances().tol:
                raise NotAProjection(f'matrix is not idempotent (max |P^2 - P| = {deviation:.3g})')

    @functools.cached_property
    def rank(self) -> int:
        return round(float(np.trace(self.matrix).real))

    def is_zero(self) -> bool:
        return self.rank == 0

    @classmethod
    def zero(cls, dim: int) -> Projection:
        return cls(np.zeros((dim, dim)), check=False)

    @classmethod
    def identity(cls, dim: int) -> Projection:
        return cls(np.eye(dim), check=False)

    @classmethod
    def diag(cls, values: Sequence[float]) -> Projection:
        return cls(np.diag(np.asarray(values, dtype=np.complex128)))

    @classmethod
    def onto(cls, vectors: Any) -> Projection:
        """Projection onto the span of the given vectors (rows or a single vector)."""
        array = np.atleast_2d(np.asarray(vectors, dtype=np.complex128))
        basis = scipy.linalg.orth(array.T, rcond=get_tolerances().rank_rcond)
        return cls(basis @ basis.conj().T, check=False)


def _same_dim(*operators: HermitianOperator) -> int:
    dims = {op.dim for op in operators}
    if len(dims) != 1:
        raise DimMismatch(f'operators of different dimensions: {sorted(dims)}')
    return dims.pop()


def clean_projection(matrix: Matrix) -> Projection:
    """Symmetrize and round eigenvalues to {0, 1}."""
    symmetric = (matrix + matrix.conj().T) / 2
    values, vectors = np.linalg.eigh(symmetric)
    kept = vectors[:, values > 0.5]
    return Projection(kept @ kept.conj().T, check=False)


def _basis_projection(basis: Matrix, dim: int) -> Projection:
    if basis.shape[1] == 0:
        return Projection.zero(dim)
    return clean_projection(basis @ basis.conj().T)


@dataclasses.dataclass(frozen=True)
class Eigendecomposition:
    """Clustered spectral decomposition ``A = sum(value * projection)``."""

    eigenvalues: tuple[float, ...]
    eigenprojections: tuple[Projection, ...]

    @property
    def multiplicities(self) -> tuple[int, ...]:
        return tuple(p.rank for p in self.eigenprojections)

    def reconstruct(self) -> HermitianOperator:
        dim = self.eigenprojections[0].dim
        total = np.zeros((dim, dim), dtype=np.complex128)
        for value, projection in zip(self.eigenvalues, self.eigenprojections):
            total += value * projection.matrix
        return HermitianOperator(total, check=False)


@functools.lru_cache(maxsize=4096)
def _eig_cached(key: bytes, dim: int, cluster_tol: float) -> Eigendecomposition:
    matrix = np.frombuffer(key, dtype=np.complex128).reshape(dim, dim)
    values, vectors = scipy.linalg.eigh(matrix)
    groups: list[list[int]] = []
    for index, value in enumerate(values):
        if groups and value - values[groups[-1][0]] <= cluster_tol:
            groups[-1].append(index)
        else:
            groups.append([index])
    eigenvalues = []
    projections = []
    for group in groups:
        eigenvalues.append(float(np.mean(values[group])))
        basis = vectors[:, group]
        projections.append(Projection(basis @ basis.conj().T, check=False))
    return Eigendecomposition(tuple(eigenvalues), tuple(projections))


def eig_hermitian(operator: HermitianOperator, cluster_tol: float | None = None) -> Eigendecomposition:
    """Deterministic eigendecomposition with eigenvalue clustering.

    Eigenvalues closer than ``cluster_tol`` (default ``cluster_rel * (1 + |A|)``)
    to the first value of their cluster share one eigenprojection.
    """
    if not isinstance(operator, HermitianOperator):
        operator = HermitianOperator(operator)
    if operator.dim > MAX_DIM:
        raise ValueError(f'dimension {operator.dim} exceeds the supported maximum of {MAX_DIM}')
    if cluster_tol is None:
        cluster_tol = get_tolerances().cluster_rel * (1.0 + operator.norm())
    matrix = np.ascontiguousarray(operator.matrix)
    return _eig_cached(matrix.tobytes(), operator.dim, cluster_tol)


def proj_leq(p: Projection, q: Projection, tol: float | None = None) -> bool:
    """``P <= Q`` iff ``QP = P`` (range containment)."""
    _same_dim(p, q)
    tol = get_tolerances().tol if tol is None else tol
    return float(np.max(np.abs(q.matrix @ p.matrix - p.matrix))) <= tol


def proj_eq(p: Projection, q: Projection, tol: float | None = None) -> bool:
    _same_dim(p, q)
    tol = get_tolerances().tol if tol is None else tol
    return float(np.max(np.abs(p.matrix - q.matrix))) <= tol


def _numerical_rank(singular_values: npt.NDArray[np.float64]) -> int:
    # rounding noise alone has rank zero
    if singular_values.size == 0:
        return 0
    threshold = get_tolerances().rank_rcond * max(1.0, float(singular_values[0]))
    return int(np.count_nonzero(singular_values > threshold))


def kernel_basis(matrix: Matrix) -> Matrix:
    """Orthonormal basis (columns) of the null space of ``matrix``."""
    _, values, vh = scipy.linalg.svd(matrix, full_matrices=True)
    return vh[_numerical_rank(values) :].conj().T


def image_basis(matrix: Matrix) -> Matrix:
    """Orthonormal basis (columns) of the column space of ``matrix``."""
    u, values, _ = scipy.linalg.svd(matrix, full_matrices=False)
    return u[:, : _numerical_rank(values)]


def proj_meet(p: Projection, q: Projection) -> Projection:
    """Projection onto ``range(P) & range(Q)``."""
    dim = _same_dim(p, q)
    identity = np.eye(dim)
    stacked = np.vstack([identity - p.matrix, identity - q.matrix])
    return _basis_projection(kernel_basis(stacked), dim)


def proj_join(p: Projection, q: Projection) -> Projection:
    """Support projection of ``P + Q``."""
    dim = _same_dim(p, q)
    return _basis_projection(image_basis(p.matrix + q.matrix), dim)


def orthocomplement(p: Projection) -> Projection:
    return Projection(np.eye(p.dim) - p.matrix, check=False)


def support_projection(operator: HermitianOperator) -> Projection:
    """Projection onto the range of ``operator``."""
    return _basis_projection(image_basis(operator.matrix), operator.dim)


def range_basis(p: Projection) -> Matrix:
    """Orthonormal basis (columns) of ``range(P)``."""
    values, vectors = np.linalg.eigh(p.matrix)
    return vectors[:, values > 0.5]


def commutator_norm(a: HermitianOperator, b: HermitianOperator) -> float:
    _same_dim(a, b)
    return float(np.linalg.norm(a.matrix @ b.matrix - b.matrix @ a.matrix, 2))


def meet_all(projections: Iterable[Projection], dim: int) -> Projection:
    return functools.reduce(proj_meet, projections, Projection.identity(dim))


def join_all(projections: Iterable[Projection], dim: int) -> Projection:
    return functools.reduce(proj_join, projections, Projection.zero(dim))


class ProjectionLattice:
    """The (non-distributive) lattice P(N) of projections of a given dimension."""

    def __init__(self, dim: int) -> None:
        self.dim = dim

    @property
    def top(self) -> Projection:
        return Projection.identity(self.dim)

    @property
    def bottom(self) -> Projection:
        return Projection.zero(self.dim)

    def leq(self, a: Projection, b: Projection) -> bool:
        return proj_leq(a, b)

    def meet(self, items: Iterable[Projection]) -> Projection:
        return meet_all(items, self.dim)

    def join(self, items: Iterable[Projection]) -> Projection:
        return join_all(items, self.dim)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ProjectionLattice) and other.dim == self.dim

    def __hash__(self) -> int:
        return hash(('P', self.dim))

    def __repr__(self) -> str:
        return f'ProjectionLattice(dim={self.dim})'


__all__ = (
    'Eigendecomposition',
    'HermitianOperator',
    'Matrix',
    'Projection',
    'ProjectionLattice',
    'clean_projection',
    'commutator_norm',
    'eig_hermitian',
    'join_all',
    'meet_all',
    'orthocomplement',
    'proj_eq',
    'proj_join',
    'proj_leq',
    'proj_meet',
    'range_basis',
    'support_projection',
)
