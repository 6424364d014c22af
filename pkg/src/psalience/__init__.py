"""Orthogonal log-linear decomposition and probabilistic salience of
contingency tables, with interaction-limited release.

The pipeline: build a table over equal-level categorical attributes
(:mod:`psalience.table`), decompose its log into orthogonal per-subset
interaction subspaces (:mod:`psalience.basis`, :mod:`psalience.fitting`),
reduce to attribute subsets by geometric-mean marginalisation without
losing interaction structure (:mod:`psalience.marginal`), score how
sharply each subset's values stand out (:mod:`psalience.salience`), and
blunt the sharpest structure before releasing the data
(:mod:`psalience.depersonalize`).
"""

__version__ = "0.1.0"

from .basis import (
    BasisColumn,
    SubsetKey,
    SubspaceBasis,
    all_subsets,
    enumerate_subsets,
    full_basis,
    gram_schmidt_oracle,
    level_contrasts,
    ortho_column,
    raw_column,
    reduced_basis,
    subspace_basis,
)
from .depersonalize import (
    AuditEntry,
    LimitSpec,
    ReleaseAudit,
    audit,
    interaction_limit,
    selective_zero,
    upward_closure,
)
from .errors import (
    ArgumentError,
    DegeneratePopulationError,
    DomainError,
    EmptyInputError,
    IngestionError,
    InvalidIndexError,
    InvalidRankError,
    SalienceError,
    SchemaError,
    ShapeError,
    SizeGuardError,
    StateError,
)
from .fitting import (
    BetaVector,
    ProjectionResult,
    fit_beta,
    orthogonal_complement_magnitude,
    project_subset,
    reconstruct,
)
from .marginal import (
    ConditionalSubtable,
    GeoMeanTable,
    complement_attributes,
    conditional_subtable,
    geometric_mean_subtable,
    gm_projection_identity,
    gm_projection_total_identity,
    reduced_subset_key,
)
from .salience import (
    Psi,
    SalienceReport,
    SalienceValue,
    ScanEntry,
    hypercube_psi,
    psi,
    psi_histogram,
    scan,
)
from .synthetic import (
    correlated_pair_table,
    planted_interaction_table,
    random_adjusted_table,
)
from .table import (
    AttributeSchema,
    CellIndex,
    ContingencyTable,
    LogTable,
    generic_schema,
    lex_rank,
    lex_unrank,
    log_transform,
    tabulate,
    zero_adjust,
)
from .verify import VerificationReport, run_verification

__all__ = [name for name in dir() if not name.startswith("_")]
