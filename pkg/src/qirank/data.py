"""Shared data model: labeled query-result records, query-grouped datasets,
ordinal label scales and fitted model parameters.

Everything here is immutable after construction and safe to share across
threads or processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

__all__ = [
    "DatasetError",
    "OrdinalScale",
    "Record",
    "Dataset",
    "ModelParams",
    "validate_dataset",
]


class DatasetError(ValueError):
    """A record list cannot form a consistent dataset."""


@dataclass(frozen=True)
class OrdinalScale:
    """Label scale: valid labels are the integers 0..levels-1, higher = more relevant."""

    levels: int

    def __post_init__(self) -> None:
        if self.levels not in (2, 3):
            raise DatasetError(f"ordinal scale must have 2 or 3 levels, got {self.levels}")

    @property
    def labels(self) -> range:
        return range(self.levels)

    def __contains__(self, label: int) -> bool:
        return 0 <= label < self.levels


@dataclass(frozen=True)
class Record:
    """One query-result row: ordinal label, opaque query id, dense feature
    vector, free-form trailing comment."""

    query_id: str
    label: int
    features: tuple[float, ...]
    meta: str = ""


@dataclass(frozen=True)
class Dataset:
    """Records grouped contiguously by query.

    ``query_index`` maps each query id, in order of first appearance, to the
    contiguous range of its record positions.  Within a query the original
    record order is preserved; it is the deterministic tie-break key for
    ranking downstream.
    """

    records: tuple[Record, ...]
    query_index: dict[str, range]
    k: int
    scale: OrdinalScale

    @property
    def n_queries(self) -> int:
        return len(self.query_index)

    @property
    def query_ids(self) -> tuple[str, ...]:
        return tuple(self.query_index)

    def group(self, query_id: str) -> tuple[Record, ...]:
        span = self.query_index[query_id]
        return self.records[span.start : span.stop]

    def groups(self) -> Iterator[tuple[str, tuple[Record, ...]]]:
        for qid, span in self.query_index.items():
            yield qid, self.records[span.start : span.stop]

    @cached_property
    def feature_matrix(self) -> np.ndarray:
        """(n_records, k) float64 matrix; read-only."""
        mat = np.array([r.features for r in self.records], dtype=np.float64)
        mat = mat.reshape(len(self.records), self.k)
        mat.flags.writeable = False
        return mat

    @cached_property
    def label_array(self) -> np.ndarray:
        arr = np.array([r.label for r in self.records], dtype=np.int64)
        arr.flags.writeable = False
        return arr


@dataclass(frozen=True)
class ModelParams:
    """Global weight vector plus per-query intercepts.

    ``intercepts`` maps each training query id to a single intercept (binary
    scale) or a (high, low) pair (trinary scale).  A fitted high intercept is
    expected to exceed the low one in practice, but that ordering is never
    required or enforced here.  ``shared_intercept`` is used only by the
    single-intercept baseline model, which has no per-query entries.
    """

    w: tuple[float, ...]
    intercepts: dict[str, float | tuple[float, float]] = field(default_factory=dict)
    shared_intercept: float | None = None

    def __post_init__(self) -> None:
        for v in self.w:
            if not math.isfinite(v):
                raise DatasetError("non-finite weight entry")
        for qid, value in self.intercepts.items():
            flat = value if isinstance(value, tuple) else (value,)
            if not all(math.isfinite(v) for v in flat):
                raise DatasetError(f"non-finite intercept for query {qid!r}")
        if self.shared_intercept is not None and not math.isfinite(self.shared_intercept):
            raise DatasetError("non-finite shared intercept")

    @property
    def k(self) -> int:
        return len(self.w)

    @cached_property
    def w_array(self) -> np.ndarray:
        arr = np.array(self.w, dtype=np.float64)
        arr.flags.writeable = False
        return arr


def _infer_levels(records: Sequence[Record]) -> int:
    max_label = max(r.label for r in records)
    if max_label >= 3:
        idx = next(i for i, r in enumerate(records) if r.label == max_label)
        raise DatasetError(f"record {idx}: label {max_label} outside supported scales (0..2)")
    return 2 if max_label <= 1 else 3


def validate_dataset(
    records: Iterable[Record],
    levels: int | OrdinalScale | None = None,
) -> Dataset:
    """Check a record list and assemble it into a query-grouped Dataset.

    Feature dimensionality must be consistent and all values finite; labels
    must fall inside the declared scale, or inside the inferred one
    (max observed label + 1, floored at two levels) when ``levels`` is None.
    Records are regrouped so that each query occupies one contiguous block,
    queries ordered by first appearance and records keeping their original
    order within each query.
    """
    recs = tuple(records)
    if not recs:
        raise DatasetError("no records")

    k = len(recs[0].features)
    for i, rec in enumerate(recs):
        if len(rec.features) != k:
            raise DatasetError(
                f"record {i}: inconsistent dimensionality (expected {k}, got {len(rec.features)})"
            )
        for v in rec.features:
            if not math.isfinite(v):
                raise DatasetError(f"record {i}: non-finite feature value")
        if not isinstance(rec.label, int) or isinstance(rec.label, bool):
            raise DatasetError(f"record {i}: non-integer label {rec.label!r}")

    if levels is None:
        scale = OrdinalScale(_infer_levels(recs))
    else:
        scale = levels if isinstance(levels, OrdinalScale) else OrdinalScale(levels)
    for i, rec in enumerate(recs):
        if rec.label not in scale:
            raise DatasetError(
                f"record {i}: label {rec.label} outside scale 0..{scale.levels - 1}"
            )

    by_query: dict[str, list[Record]] = {}
    for rec in recs:
        by_query.setdefault(rec.query_id, []).append(rec)

    grouped: list[Record] = []
    index: dict[str, range] = {}
    for qid, group in by_query.items():
        index[qid] = range(len(grouped), len(grouped) + len(group))
        grouped.extend(group)

    return Dataset(records=tuple(grouped), query_index=index, k=k, scale=scale)
