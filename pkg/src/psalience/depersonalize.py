"""Interaction limiting: reducing salience before a table is released.

Zeroing expansion blocks above a cutoff order (or an explicit upward-closed
set of subsets) and reconstructing yields a release whose high-order
probabilistic structure is gone: refitting the released table gives zero
for every removed block, subset-level salience never increases for any
subset that contained a removed block, and is untouched for the rest.

The release is exponentiated back to count space.  Optionally the counts
are rescaled to the original population total (a uniform rescaling, i.e. a
constant shift of the log table that only moves the constant coefficient)
and rounded to integers with a largest-remainder correction so the total
is preserved exactly.  Audits always compare salience on the
un-rescaled, un-rounded reconstruction, isolating the effect of the
coefficient surgery itself; rounding necessarily perturbs the refitted
coefficients a little, which is the price of an integer release.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .basis import SubsetKey, all_subsets, check_subset
from .errors import ArgumentError, ShapeError, StateError
from .fitting import BetaVector, fit_beta, reconstruct
from .marginal import _gm_log_values
from .salience import _salience_from_logs
from .table import ContingencyTable, log_transform

PSI_DRIFT_TOL = 1e-9


@dataclass(frozen=True)
class LimitSpec:
    """What to zero and how to post-process the released counts.

    ``order_limit`` zeroes every block of size above ``k_dagger``;
    ``selective`` zeroes the upward closure of ``zero_subsets``.
    """

    mode: str
    k_dagger: int | None = None
    zero_subsets: tuple[SubsetKey, ...] | None = None
    renormalize: bool = True
    round_counts: bool = False

    def __post_init__(self):
        if self.mode == "order_limit":
            if self.k_dagger is None:
                raise ArgumentError("order_limit needs k_dagger")
        elif self.mode == "selective":
            if not self.zero_subsets:
                raise ArgumentError("selective mode needs at least one subset to zero")
            normal = tuple(tuple(int(i) for i in s) for s in self.zero_subsets)
            if any(len(s) == 0 for s in normal):
                raise ArgumentError("cannot zero the constant term")
            object.__setattr__(self, "zero_subsets", normal)
        else:
            raise ArgumentError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class AuditEntry:
    subset: SubsetKey
    psi_before: float
    psi_after: float
    contains_zeroed: bool

    @property
    def delta(self) -> float:
        return self.psi_after - self.psi_before


@dataclass(frozen=True)
class ReleaseAudit:
    """Per-subset salience before and after a release.

    ``violations`` lists subsets that broke their contract: salience grew
    for a subset containing a zeroed block, or moved at all for one that
    did not.
    """

    entries: tuple[AuditEntry, ...]
    zeroed_blocks: tuple[SubsetKey, ...]
    total_drift: float
    violations: tuple[SubsetKey, ...] = field(default=())


def upward_closure(seeds: Sequence[Sequence[int]], n_attributes: int) -> tuple[SubsetKey, ...]:
    """All subsets containing at least one seed, in enumeration order.

    Removing a block while keeping a superset block would leave structure
    that implies the removed one, so the zero set is always closed upward.
    """
    keys = [check_subset(s, n_attributes) for s in seeds]
    if any(len(s) == 0 for s in keys):
        raise ArgumentError("cannot zero the constant term")
    sets = [set(s) for s in keys]
    closed = []
    for subset in all_subsets(n_attributes):
        if not subset:
            continue
        members = set(subset)
        if any(seed <= members for seed in sets):
            closed.append(subset)
    return tuple(closed)


def _zero_blocks(beta: BetaVector, zeroed: Sequence[SubsetKey]) -> BetaVector:
    blocks = dict(beta.blocks)
    for subset in zeroed:
        blocks[subset] = np.zeros_like(blocks[subset])
    return BetaVector(beta.beta0, blocks, beta.n_attributes, beta.n_levels)


def _round_preserving_total(values: np.ndarray, target: int) -> np.ndarray:
    """Round half to even, then nudge the entries nearest their rounding
    boundary until the sum hits ``target`` exactly."""
    base = np.rint(values)
    deficit = int(round(target - base.sum()))
    if deficit:
        fractions = values - base
        if deficit > 0:
            order = np.argsort(-fractions, kind="stable")
            base[order[:deficit]] += 1.0
        else:
            order = np.argsort(fractions, kind="stable")
            base[order[:-deficit]] -= 1.0
    return base


def _apply_zeroing(table: ContingencyTable, zeroed: Sequence[SubsetKey], spec: LimitSpec):
    if not table.adjusted:
        raise StateError("de-personalisation needs an adjusted table")
    log_table = log_transform(table)
    limited = reconstruct(_zero_blocks(fit_beta(log_table), zeroed), table.schema)
    counts = np.exp(limited.values)
    if spec.renormalize:
        counts = counts * (table.n_total / counts.sum())
        n_total = table.n_total
    else:
        n_total = float(counts.sum())
    if spec.round_counts:
        counts = _round_preserving_total(counts, int(round(n_total)))
        n_total = float(counts.sum())
    released = ContingencyTable(
        table.schema,
        counts,
        n_total,
        adjusted=bool(counts.min() >= 1.0 - 1e-9),
    )
    audit_result = _audit_log_values(
        np.log(table.counts),
        limited.values,
        table.schema,
        zeroed,
        total_drift=float(counts.sum() - table.n_total),
    )
    return released, audit_result


def _audit_log_values(logs_before, logs_after, schema, zeroed, total_drift, sizes=None):
    zeroed_sets = [set(s) for s in zeroed]
    entries = []
    violations = []
    for subset in all_subsets(schema.n_attributes):
        if not subset or (sizes is not None and len(subset) not in sizes):
            continue
        before = _salience_from_logs(_gm_log_values(logs_before, schema, subset)).psi
        after = _salience_from_logs(_gm_log_values(logs_after, schema, subset)).psi
        contains = any(z <= set(subset) for z in zeroed_sets)
        entries.append(AuditEntry(subset, before, after, contains))
        if contains:
            if after > before + PSI_DRIFT_TOL:
                violations.append(subset)
        elif abs(after - before) > PSI_DRIFT_TOL:
            violations.append(subset)
    return ReleaseAudit(tuple(entries), tuple(zeroed), total_drift, tuple(violations))


def interaction_limit(table: ContingencyTable, spec: LimitSpec) -> tuple[ContingencyTable, ReleaseAudit]:
    """Zero every expansion block of size above ``spec.k_dagger`` and rebuild.

    With ``k_dagger = N`` nothing is zeroed and the table passes through
    unchanged.  The audit covers every non-empty subset.
    """
    if spec.mode != "order_limit":
        raise ArgumentError("interaction_limit needs an order_limit spec")
    n = table.schema.n_attributes
    k_dagger = int(spec.k_dagger)
    if not 1 <= k_dagger <= n:
        raise ArgumentError(f"k_dagger {k_dagger} out of range [1, {n}]")
    zeroed = tuple(s for s in all_subsets(n) if len(s) > k_dagger)
    return _apply_zeroing(table, zeroed, spec)


def selective_zero(table: ContingencyTable, spec: LimitSpec) -> tuple[ContingencyTable, ReleaseAudit]:
    """Zero the upward closure of the requested subsets and rebuild."""
    if spec.mode != "selective":
        raise ArgumentError("selective_zero needs a selective spec")
    zeroed = upward_closure(spec.zero_subsets, table.schema.n_attributes)
    return _apply_zeroing(table, zeroed, spec)


def audit(
    original: ContingencyTable,
    released: ContingencyTable,
    k: int | None = None,
    zeroed_blocks: Sequence[SubsetKey] | None = None,
) -> ReleaseAudit:
    """Compare per-subset salience of two tables sharing a schema.

    Restricts to subsets of size ``k`` when given, otherwise covers every
    non-empty subset.  Salience is evaluated on the log counts directly,
    so releases whose entries dipped below 1 can still be audited.  When
    the zeroed blocks are known, unchanged-versus-decreased contracts are
    classified per subset; otherwise only salience increases are flagged.
    """
    if original.schema != released.schema:
        raise ShapeError("audit needs two tables over the same schema")
    n = original.schema.n_attributes
    sizes = None
    if k is not None:
        if not 1 <= k <= n:
            raise ArgumentError(f"subset size {k} out of range [1, {n}]")
        sizes = {k}
    zeroed = tuple(check_subset(s, n) for s in zeroed_blocks) if zeroed_blocks else ()
    report = _audit_log_values(
        np.log(np.maximum(original.counts, np.finfo(float).tiny)),
        np.log(np.maximum(released.counts, np.finfo(float).tiny)),
        original.schema,
        zeroed,
        total_drift=float(released.counts.sum() - original.n_total),
        sizes=sizes,
    )
    if not zeroed:
        # without the zero set only increases are contract breaches
        increases = tuple(
            e.subset for e in report.entries if e.psi_after > e.psi_before + PSI_DRIFT_TOL
        )
        report = ReleaseAudit(report.entries, (), report.total_drift, increases)
    return report
