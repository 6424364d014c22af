"""Fitting and evaluating the orthogonal log-linear expansion.

A log table ``T`` decomposes exactly as the constant direction plus one
block of coefficients per non-empty attribute subset.  Because the basis
columns are orthogonal, each block is obtained independently by scaled
inner products and the expansion is an identity: reconstructing from a
fitted coefficient vector returns the original table.

Projection magnitudes onto the subset subspaces are the quantities the
salience measures are built from; coefficients themselves depend on the
contrast choice in :mod:`psalience.basis` and are exposed for inspection
and coefficient surgery only.

Summation order is fixed (subset enumeration order, then column order) so
results are reproducible run to run.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .basis import SubsetKey, all_subsets, check_subset, subspace_basis
from .errors import ShapeError
from .table import AttributeSchema, LogTable, freeze


@dataclass(frozen=True)
class BetaVector:
    """Expansion coefficients: scalar ``beta0`` for the constant direction
    plus one length-``(M-1)**k`` block per non-empty subset."""

    beta0: float
    blocks: Mapping[SubsetKey, np.ndarray]
    n_attributes: int
    n_levels: int

    @property
    def total_coefficients(self) -> int:
        return 1 + sum(block.size for block in self.blocks.values())


@dataclass(frozen=True)
class ProjectionResult:
    """Projection of a log table onto one subset's subspace."""

    subset: SubsetKey
    chi: np.ndarray
    magnitude: float

    def __post_init__(self):
        object.__setattr__(self, "chi", freeze(self.chi))


def fit_beta(log_table: LogTable) -> BetaVector:
    """Coefficients of the orthogonal expansion of ``log_table``.

    Blockwise ``(column . T) / |column|^2`` over the generated columns;
    ``beta0`` scales the unit-norm constant direction.
    """
    schema = log_table.schema
    values = log_table.values
    blocks: dict[SubsetKey, np.ndarray] = {}
    beta0 = 0.0
    for subset in all_subsets(schema.n_attributes):
        basis = subspace_basis(subset, schema)
        coef = (basis.matrix.T @ values) / basis.norms_sq
        if subset:
            blocks[subset] = freeze(coef)
        else:
            beta0 = float(coef[0])
    return BetaVector(beta0, blocks, schema.n_attributes, schema.n_levels)


def reconstruct(beta: BetaVector, schema: AttributeSchema) -> LogTable:
    """Assemble the log table encoded by ``beta``, block by block."""
    if (beta.n_attributes, beta.n_levels) != (schema.n_attributes, schema.n_levels):
        raise ShapeError(
            f"coefficients were fitted for a {beta.n_attributes}-attribute, "
            f"{beta.n_levels}-level table"
        )
    values = np.full(schema.n_cells, beta.beta0 / np.sqrt(schema.n_cells))
    for subset in all_subsets(schema.n_attributes):
        if not subset:
            continue
        block = np.asarray(beta.blocks[subset], dtype=float)
        basis = subspace_basis(subset, schema)
        if block.shape != (basis.dimension,):
            raise ShapeError(
                f"block for subset {subset} has shape {block.shape}, "
                f"expected ({basis.dimension},)"
            )
        values += basis.matrix @ block
    return LogTable(schema, values)


def project_subset(log_table: LogTable, subset: Sequence[int]) -> ProjectionResult:
    """Orthogonal projection of the log table onto one subset's subspace.

    The squared magnitude is the coefficient-weighted sum
    ``sum (column . T)^2 / |column|^2``, which equals ``|chi|^2``.
    """
    schema = log_table.schema
    members = check_subset(subset, schema.n_attributes)
    basis = subspace_basis(members, schema)
    dots = basis.matrix.T @ log_table.values
    coef = dots / basis.norms_sq
    chi = basis.matrix @ coef
    magnitude = float(np.sqrt(max(float(coef @ dots), 0.0)))
    return ProjectionResult(members, chi, magnitude)


def orthogonal_complement_magnitude(log_table: LogTable) -> float:
    """Norm of the log table's component orthogonal to the uniform vector.

    Computed as ``|T - mean(T)|``; algebraically this equals
    ``sqrt(|T|^2 - (sum T)^2 / M_T)``, the combined magnitude of every
    non-constant block, but the difference form cancels badly near
    uniformity.
    """
    values = log_table.values
    if values.size and np.ptp(values) == 0.0:
        return 0.0
    return float(np.linalg.norm(values - values.mean()))
