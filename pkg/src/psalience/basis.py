"""Orthogonal interaction subspaces of the log-linear design.

The space of log tables, R^(M**N), splits into one subspace per subset of
attributes: the subset's raw indicator columns span everything that
depends only on its digits, and removing what lower-order subsets already
span leaves an orthogonal complement of dimension ``(M-1)**k`` for a
subset of size ``k``.  Summed over all ``2**N`` subsets (constant term
included) the dimensions add up to ``M**N`` exactly.

Columns for a subset are generated directly as tensor products of
per-attribute contrast vectors, never by materialising or orthogonalising
an ``M**N x M**N`` matrix:

* for each attribute in the subset, one column of ``level_contrasts(M)``
  (a fixed orthogonal complement of the all-ones vector in R^M);
* the all-ones vector of length M for every other attribute.

Tensor products of orthogonal factors are orthogonal, which makes
orthogonality within and across subsets exact by construction.  A literal
sequential Gram-Schmidt pass over the raw indicator columns
(:func:`gram_schmidt_oracle`) is provided for tests as an independent
reference; it must agree with the generated columns subspace by subspace.

Columns are kept unnormalised; squared norms travel alongside them so
projections divide by the right diagonal.  Expansion coefficients are
therefore specific to this contrast choice, while every projection-based
quantity downstream depends only on the subspaces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Sequence

import numpy as np

from .errors import ArgumentError, SizeGuardError
from .table import AttributeSchema, freeze, generic_schema

SubsetKey = tuple[int, ...]
"""Attribute indices in strictly decreasing order; ``()`` is the constant term."""

GRAM_SCHMIDT_CELL_LIMIT = 4096


def check_subset(subset: Sequence[int], n_attributes: int) -> SubsetKey:
    """Validate and normalise a subset key (strictly decreasing, in range)."""
    members = tuple(int(i) for i in subset)
    for i in members:
        if not 0 <= i < n_attributes:
            raise ArgumentError(f"attribute index {i} out of range [0, {n_attributes})")
    if any(a <= b for a, b in zip(members, members[1:])):
        raise ArgumentError(f"subset {members} must be strictly decreasing")
    return members


def enumerate_subsets(n: int, k: int) -> list[SubsetKey]:
    """All size-k subsets of attributes ``{n-1, ..., 0}``.

    Subsets are written with the largest index leftmost and listed in
    lexicographic order of those descending index tuples, e.g. for pairs
    ``(n-1, n-2), (n-1, n-3), ..., (1, 0)``.
    """
    if not 0 <= k <= n:
        raise ArgumentError(f"subset size {k} out of range [0, {n}]")
    return list(itertools.combinations(range(n - 1, -1, -1), k))


def all_subsets(n: int) -> list[SubsetKey]:
    """Every subset, constant term first, then by size, then enumeration order."""
    out: list[SubsetKey] = []
    for k in range(n + 1):
        out.extend(enumerate_subsets(n, k))
    return out


@lru_cache(maxsize=None)
def level_contrasts(m: int) -> np.ndarray:
    """An ``m x (m-1)`` matrix of mutually orthogonal zero-sum contrast columns.

    Column ``c`` compares level ``c`` against the levels above it:
    ``m-c-1`` at position ``c``, ``-1`` below, zero above.  Together with
    the all-ones vector the columns form an orthogonal basis of R^m.
    """
    out = np.zeros((m, m - 1))
    for c in range(m - 1):
        out[c, c] = m - c - 1
        out[c + 1:, c] = -1.0
    out.setflags(write=False)
    return out


def _kron_chain(factors) -> np.ndarray:
    return reduce(np.kron, factors)


def _attribute_factors(n: int, m: int, subset: SubsetKey, per_member) -> list[np.ndarray]:
    """Kron factors ordered attribute ``n-1`` first; ones off the subset."""
    ones = np.ones(m)
    factors = []
    for attribute in range(n - 1, -1, -1):
        if attribute in subset:
            factors.append(per_member(subset.index(attribute)))
        else:
            factors.append(ones)
    return factors


def raw_column(subset: Sequence[int], levels: Sequence[int], schema: AttributeSchema) -> np.ndarray:
    """0/1 indicator of the cells whose subset digits equal ``levels``.

    Exactly ``M**(N-k)`` entries are 1; the empty subset gives all ones.
    """
    n, m = schema.n_attributes, schema.n_levels
    members = check_subset(subset, n)
    codes = _check_levels(levels, len(members), m)

    def factor(j):
        e = np.zeros(m)
        e[codes[j]] = 1.0
        return e

    return _kron_chain(_attribute_factors(n, m, members, factor))


def _check_levels(levels: Sequence[int], k: int, m: int) -> tuple[int, ...]:
    codes = tuple(int(v) for v in levels)
    if len(codes) != k:
        raise ArgumentError(f"expected {k} levels, got {len(codes)}")
    for v in codes:
        if not 0 <= v < m:
            raise ArgumentError(f"level {v} out of range [0, {m})")
    return codes


@dataclass(frozen=True)
class BasisColumn:
    """One generated column: its subset, the code it was generated from,
    and the full-length entry vector.

    For columns of a :class:`SubspaceBasis` the code indexes contrasts
    (each in ``[0, M-1)``); for :func:`ortho_column` it echoes the
    requested level vector.
    """

    subset: SubsetKey
    level_code: tuple[int, ...]
    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", freeze(self.entries))

    @property
    def norm_sq(self) -> float:
        return float(self.entries @ self.entries)


def ortho_column(subset: Sequence[int], levels: Sequence[int], schema: AttributeSchema) -> BasisColumn:
    """Component of ``raw_column`` lying in the subset's own subspace.

    Tensor product of ``(e_level - 1/M)`` over the subset's attributes and
    ones elsewhere.  The ``M**k`` columns of one subset span its
    ``(M-1)**k``-dimensional subspace (they are not independent).  Entries
    sum to zero for non-empty subsets, and the value at a cell depends
    only on the cell's subset digits.
    """
    n, m = schema.n_attributes, schema.n_levels
    members = check_subset(subset, n)
    if not members:
        raise ArgumentError("ortho_column needs a non-empty subset")
    codes = _check_levels(levels, len(members), m)

    def factor(j):
        e = np.full(m, -1.0 / m)
        e[codes[j]] += 1.0
        return e

    entries = _kron_chain(_attribute_factors(n, m, members, factor))
    return BasisColumn(members, codes, entries)


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthogonal, unnormalised columns spanning one subset's subspace.

    ``matrix`` is ``M**N x (M-1)**k`` with squared column norms in
    ``norms_sq``; ``codes`` lists the contrast code of each column.  The
    empty subset gets the single unit-norm constant direction.
    """

    subset: SubsetKey
    codes: tuple[tuple[int, ...], ...]
    matrix: np.ndarray
    norms_sq: np.ndarray

    @property
    def dimension(self) -> int:
        return self.matrix.shape[1]

    @property
    def columns(self) -> tuple[BasisColumn, ...]:
        return tuple(
            BasisColumn(self.subset, code, self.matrix[:, i])
            for i, code in enumerate(self.codes)
        )


@lru_cache(maxsize=None)
def _subspace_arrays(n: int, m: int, subset: SubsetKey):
    m_t = m ** n
    k = len(subset)
    if k == 0:
        matrix = np.full((m_t, 1), 1.0 / np.sqrt(m_t))
        matrix.setflags(write=False)
        norms = np.ones(1)
        norms.setflags(write=False)
        return (((),), matrix, norms)
    contrasts = level_contrasts(m)
    codes = tuple(itertools.product(range(m - 1), repeat=k))
    matrix = np.empty((m_t, len(codes)))
    for i, code in enumerate(codes):
        factors = _attribute_factors(n, m, subset, lambda j, c=code: contrasts[:, c[j]])
        matrix[:, i] = _kron_chain(factors)
    norms = np.einsum("ij,ij->j", matrix, matrix)
    matrix.setflags(write=False)
    norms.setflags(write=False)
    return (codes, matrix, norms)


def subspace_basis(subset: Sequence[int], schema: AttributeSchema) -> SubspaceBasis:
    """The ``(M-1)**k`` mutually orthogonal columns of one subset's subspace."""
    members = check_subset(subset, schema.n_attributes)
    codes, matrix, norms = _subspace_arrays(schema.n_attributes, schema.n_levels, members)
    return SubspaceBasis(members, codes, matrix, norms)


def full_basis(schema: AttributeSchema) -> list[SubspaceBasis]:
    """Subspace bases for every subset in enumeration order (constant first)."""
    return [subspace_basis(s, schema) for s in all_subsets(schema.n_attributes)]


def reduced_basis(k: int, m: int) -> list[SubspaceBasis]:
    """Complete basis of a k-attribute, m-level table (dimension ``m**k``).

    Same construction as :func:`full_basis` with N replaced by k; used to
    analyse geometric-mean marginal tables in their own smaller space.
    """
    if k < 1:
        raise ArgumentError(f"need at least one attribute, got {k}")
    return full_basis(generic_schema(k, m))


def gram_schmidt_oracle(schema: AttributeSchema, cell_limit: int = GRAM_SCHMIDT_CELL_LIMIT) -> list[BasisColumn]:
    """Sequential Gram-Schmidt over the raw indicator columns.

    Processes the constant column and then every subset's raw columns in
    enumeration order (level codes counted in radix M), projecting each
    candidate against everything accepted so far and dropping dependent
    candidates.  This is the reference construction the tensor-product
    generator is tested against; it materialises the full basis, so it is
    refused beyond ``cell_limit`` cells.
    """
    m_t = schema.n_cells
    if m_t > cell_limit:
        raise SizeGuardError(
            f"{m_t} cells exceeds the Gram-Schmidt oracle limit of {cell_limit}"
        )
    n, m = schema.n_attributes, schema.n_levels
    accepted = np.empty((m_t, m_t))
    count = 0
    out: list[BasisColumn] = []
    for subset in all_subsets(n):
        for code in itertools.product(range(m), repeat=len(subset)):
            candidate = raw_column(subset, code, schema)
            residual = candidate.astype(float)
            for _ in range(2):  # second pass keeps tiny components from re-entering
                if count:
                    q = accepted[:, :count]
                    residual = residual - q @ (q.T @ residual)
            norm_sq = float(residual @ residual)
            if norm_sq > 1e-20 * float(candidate @ candidate):
                accepted[:, count] = residual / np.sqrt(norm_sq)
                count += 1
                out.append(BasisColumn(subset, code, residual))
    if count != m_t:
        raise AssertionError(f"orthogonalisation produced {count} columns, expected {m_t}")
    return out
