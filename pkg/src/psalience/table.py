"""Contingency tables over categorical attributes with a common level count.

Conventions used throughout the package:

* There are ``N`` attributes, numbered ``N-1`` down to ``0``.  A schema
  lists them left to right starting with attribute ``N-1``, so the last
  attribute in the schema is attribute ``0``.
* Every attribute has the same number of levels ``M`` (at least 2).
  Heterogeneous level counts are rejected at schema construction.
* A cell is identified by a digit tuple ``(i_{N-1}, ..., i_0)`` with the
  digit of the highest-numbered attribute leftmost.  Its position in the
  flat count vector is the radix-M value ``sum_j i_j * M**j``: the digit
  of attribute 0 varies fastest.
* Only the natural logarithm is used.  The salience measures downstream
  are ratios of norms of one and the same log vector, so any other base
  would cancel; no base option is exposed.
* Numeric equality is judged at relative tolerance ``1e-9`` against the
  larger magnitude with an absolute floor of ``1e-12``.

All types here are immutable after construction and all operations are
pure functions, so values can be shared freely between workers.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegeneratePopulationError,
    DomainError,
    EmptyInputError,
    IngestionError,
    InvalidIndexError,
    InvalidRankError,
    SchemaError,
    ShapeError,
    StateError,
)

REL_TOL = 1e-9
ABS_TOL = 1e-12

CellIndex = tuple[int, ...]
"""Digit tuple ``(i_{N-1}, ..., i_0)`` identifying one cell."""


def values_close(a: float, b: float) -> bool:
    """Equality under the package-wide tolerance policy."""
    return abs(a - b) <= max(REL_TOL * max(abs(a), abs(b)), ABS_TOL)


def freeze(array) -> np.ndarray:
    """Return a read-only float64 copy of ``array``."""
    out = np.array(array, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class AttributeSchema:
    """Names and ordered level labels of the attributes.

    ``attributes`` is an ordered sequence of ``(name, levels)`` pairs; the
    first entry is attribute ``N-1`` and the last is attribute ``0``.
    """

    attributes: tuple[tuple[str, tuple[str, ...]], ...]

    def __post_init__(self):
        normal = tuple(
            (str(name), tuple(str(level) for level in levels))
            for name, levels in self.attributes
        )
        object.__setattr__(self, "attributes", normal)
        if not normal:
            raise SchemaError("schema must declare at least one attribute")
        names = [name for name, _ in normal]
        if len(set(names)) != len(names):
            raise SchemaError("attribute names must be unique")
        m = len(normal[0][1])
        for name, levels in normal:
            if len(levels) != m:
                raise SchemaError(
                    f"attribute {name!r} has {len(levels)} levels, expected {m}; "
                    "all attributes must share one level count"
                )
            if len(set(levels)) != len(levels):
                raise SchemaError(f"attribute {name!r} has duplicate level labels")
        if m < 2:
            raise SchemaError("attributes need at least 2 levels")

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def n_levels(self) -> int:
        return len(self.attributes[0][1])

    @property
    def n_cells(self) -> int:
        return self.n_levels ** self.n_attributes

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.attributes)

    def attribute_name(self, attribute: int) -> str:
        """Name of attribute ``attribute`` (numbered N-1 .. 0)."""
        return self.attributes[self.n_attributes - 1 - attribute][0]

    def levels_of(self, attribute: int) -> tuple[str, ...]:
        return self.attributes[self.n_attributes - 1 - attribute][1]

    @cached_property
    def _level_maps(self) -> tuple[dict, ...]:
        # one label -> level-index map per schema position
        return tuple({label: i for i, label in enumerate(levels)} for _, levels in self.attributes)


def generic_schema(n: int, m: int) -> AttributeSchema:
    """Schema with ``n`` synthetic attributes ``a{n-1}..a0`` of ``m`` levels each."""
    if n < 1 or m < 2:
        raise SchemaError("need n >= 1 attributes and m >= 2 levels")
    return AttributeSchema(
        tuple((f"a{n - 1 - p}", tuple(str(v) for v in range(m))) for p in range(n))
    )


@dataclass(frozen=True)
class ContingencyTable:
    """Flat count vector in lexicographic cell order plus its population total.

    ``adjusted`` records whether the zero-adjustment map has been applied;
    adjusted tables have every entry at 1 or above.
    """

    schema: AttributeSchema
    counts: np.ndarray
    n_total: float
    adjusted: bool = False

    def __post_init__(self):
        counts = freeze(self.counts)
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "n_total", float(self.n_total))
        if counts.ndim != 1 or counts.size != self.schema.n_cells:
            raise ShapeError(
                f"expected {self.schema.n_cells} counts, got shape {counts.shape}"
            )
        if not np.all(np.isfinite(counts)) or np.any(counts < 0):
            raise ShapeError("counts must be finite and non-negative")
        if self.n_total <= 0:
            raise ShapeError("population total must be positive")
        if not values_close(float(counts.sum()), self.n_total):
            raise ShapeError(
                f"counts sum to {counts.sum()!r}, declared total is {self.n_total!r}"
            )
        if self.adjusted and counts.min() < 1.0 - 1e-9:
            raise ShapeError("adjusted table has an entry below 1")

    def reshaped(self) -> np.ndarray:
        """Counts as an N-dimensional view; axis 0 is attribute N-1."""
        m, n = self.schema.n_levels, self.schema.n_attributes
        return self.counts.reshape((m,) * n)


@dataclass(frozen=True)
class LogTable:
    """Elementwise natural log of an adjusted table's counts."""

    schema: AttributeSchema
    values: np.ndarray

    def __post_init__(self):
        values = freeze(self.values)
        object.__setattr__(self, "values", values)
        if values.ndim != 1 or values.size != self.schema.n_cells:
            raise ShapeError(
                f"expected {self.schema.n_cells} log values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ShapeError("log table entries must be finite")

    def reshaped(self) -> np.ndarray:
        m, n = self.schema.n_levels, self.schema.n_attributes
        return self.values.reshape((m,) * n)


def lex_rank(index: Sequence[int], schema: AttributeSchema) -> int:
    """Flat position of the cell with digits ``(i_{N-1}, ..., i_0)``.

    Digit ``j`` is weighted by ``M**j``, so the rightmost digit varies
    fastest when counting through the table.
    """
    n, m = schema.n_attributes, schema.n_levels
    digits = tuple(int(d) for d in index)
    if len(digits) != n:
        raise InvalidIndexError(f"expected {n} digits, got {len(digits)}")
    rank = 0
    for position, digit in enumerate(digits):
        if not 0 <= digit < m:
            raise InvalidIndexError(
                f"digit {digit} out of range [0, {m}) at position {position}"
            )
        rank = rank * m + digit
    return rank


def lex_unrank(rank: int, schema: AttributeSchema) -> CellIndex:
    """Digit tuple of the cell at flat position ``rank``; inverse of lex_rank."""
    n, m = schema.n_attributes, schema.n_levels
    rank = int(rank)
    if not 0 <= rank < schema.n_cells:
        raise InvalidRankError(f"rank {rank} out of range [0, {schema.n_cells})")
    digits = []
    for _ in range(n):
        digits.append(rank % m)
        rank //= m
    return tuple(reversed(digits))


def tabulate(records: Iterable[Sequence[str]], schema: AttributeSchema) -> ContingencyTable:
    """Count label tuples into an (unadjusted) contingency table.

    Each record lists one level label per attribute, in schema order.
    Raises :class:`IngestionError` naming the record and attribute for an
    unknown label, and :class:`EmptyInputError` for an empty stream.
    The result is order-independent.
    """
    n, m = schema.n_attributes, schema.n_levels
    maps = schema._level_maps
    counts = np.zeros(schema.n_cells)
    total = 0
    for number, record in enumerate(iter(records), start=1):
        labels = tuple(record)
        if len(labels) != n:
            raise IngestionError(
                f"record {number} has {len(labels)} fields, expected {n}",
                record_number=number,
            )
        rank = 0
        for position, label in enumerate(labels):
            level = maps[position].get(str(label))
            if level is None:
                name = schema.attributes[position][0]
                raise IngestionError(
                    f"record {number}: unknown level {label!r} for attribute {name!r}",
                    record_number=number,
                    attribute=name,
                )
            rank = rank * m + level
        counts[rank] += 1.0
        total += 1
    if total == 0:
        raise EmptyInputError("no records to tabulate", record_number=0)
    return ContingencyTable(schema, counts, float(total), adjusted=False)


def zero_adjust(table: ContingencyTable) -> ContingencyTable:
    """Map the table affinely so every cell is at least 1, keeping the total.

    Cell ``k`` becomes ``counts[k] / n_total * (n_total - n_cells) + 1``.
    Uniform tables are fixed points; the map is affine in the counts for a
    fixed total.  Requires ``n_total > n_cells`` and an unadjusted table.
    """
    if table.adjusted:
        raise StateError("table is already adjusted")
    m_t = table.schema.n_cells
    if table.n_total <= m_t:
        raise DegeneratePopulationError(
            f"population total {table.n_total} must exceed the cell count {m_t}"
        )
    adjusted = table.counts / table.n_total * (table.n_total - m_t) + 1.0
    return ContingencyTable(table.schema, adjusted, table.n_total, adjusted=True)


def log_transform(table: ContingencyTable) -> LogTable:
    """Elementwise natural log of the counts.

    Every entry must be at least 1 (the adjusted scale), so the logs are
    finite and non-negative.
    """
    if table.counts.min() < 1.0 - 1e-12:
        raise DomainError(
            "log transform needs every entry >= 1; zero-adjust the table first"
        )
    return LogTable(table.schema, np.log(np.maximum(table.counts, 1.0)))
