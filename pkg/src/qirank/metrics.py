"""IR ranking measures: NDCG@n, precision@n and average precision.

Conventions (fixed, matching the LETOR 2.0 evaluation tool):

* DCG@n  = sum_{j=1..min(n,len)} (2^label_j - 1) / log2(j + 1), the discount
  applying to every position including the first;
* NDCG@n = DCG@n / IDCG@n with the ideal gain from labels sorted descending,
  and 0 when the ideal gain is 0;
* P@n keeps denominator n even when fewer than n results exist;
* a label >= relevance_threshold counts as relevant for P@n and AP.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import fmean
from typing import Mapping, Sequence, Union

from .data import ModelParams, Record
from .model import rank_scores, score

__all__ = [
    "MetricConfig",
    "QueryMetrics",
    "ndcg_at_n",
    "precision_at_n",
    "average_precision",
    "evaluate_query",
    "mean_metrics",
]


@dataclass(frozen=True)
class MetricConfig:
    cutoffs: tuple[int, ...] = tuple(range(1, 11))
    relevance_threshold: int = 1
    log_base: int = 2  # the discount convention is fixed; kept for visibility

    def __post_init__(self) -> None:
        if not self.cutoffs:
            raise ValueError("cutoffs must be non-empty")
        if any(n < 1 for n in self.cutoffs):
            raise ValueError("cutoffs must be positive")
        if any(b >= a for a, b in zip(self.cutoffs[1:], self.cutoffs)):
            raise ValueError("cutoffs must be strictly ascending")
        if self.relevance_threshold < 0:
            raise ValueError("relevance_threshold must be >= 0")
        if self.log_base != 2:
            raise ValueError("only the base-2 discount is supported")


@dataclass(frozen=True)
class QueryMetrics:
    """Per-query metric values, each in [0, 1]."""

    ndcg_at: Mapping[int, float]
    precision_at: Mapping[int, float]
    average_precision: float


def _dcg(labels: Sequence[int], n: int) -> float:
    total = 0.0
    for pos, label in enumerate(labels[:n], start=1):
        total += (2.0 ** label - 1.0) / math.log2(pos + 1)
    return total


def ndcg_at_n(ranked_labels: Sequence[int], n: int) -> float:
    """Normalized discounted cumulative gain of the top n labels."""
    if n < 1:
        raise ValueError(f"cutoff must be >= 1, got {n}")
    ideal = _dcg(sorted(ranked_labels, reverse=True), n)
    if ideal == 0.0:
        return 0.0
    return _dcg(list(ranked_labels), n) / ideal


def precision_at_n(ranked_labels: Sequence[int], n: int, threshold: int = 1) -> float:
    """Fraction of the top n that is relevant (label >= threshold).

    The denominator stays n even for lists shorter than n.
    """
    if n < 1:
        raise ValueError(f"cutoff must be >= 1, got {n}")
    hits = sum(1 for label in ranked_labels[:n] if label >= threshold)
    return hits / n


def average_precision(ranked_labels: Sequence[int], threshold: int = 1) -> float:
    """Mean of precision-at-j over the relevant positions j; 0 if none are
    relevant."""
    total_relevant = sum(1 for label in ranked_labels if label >= threshold)
    if total_relevant == 0:
        return 0.0
    hits = 0
    acc = 0.0
    for pos, label in enumerate(ranked_labels, start=1):
        if label >= threshold:
            hits += 1
            acc += hits / pos
    return acc / total_relevant


def evaluate_query(
    scores: Union[ModelParams, Sequence[float]],
    group: Sequence[Record],
    config: MetricConfig = MetricConfig(),
) -> QueryMetrics:
    """Rank one query's records and compute all configured metrics.

    ``scores`` is either a fitted ModelParams (records are scored by w alone)
    or the raw score sequence aligned with ``group``.  Ranking is by
    descending score with ties broken by original position.
    """
    if not group:
        raise ValueError("empty group")
    if isinstance(scores, ModelParams):
        values = [score(scores.w, r.features) for r in group]
    else:
        values = [float(s) for s in scores]
        if len(values) != len(group):
            raise ValueError(f"got {len(values)} scores for {len(group)} records")
    order = rank_scores(values)
    ranked_labels = [group[i].label for i in order]
    return QueryMetrics(
        ndcg_at={n: ndcg_at_n(ranked_labels, n) for n in config.cutoffs},
        precision_at={
            n: precision_at_n(ranked_labels, n, config.relevance_threshold)
            for n in config.cutoffs
        },
        average_precision=average_precision(ranked_labels, config.relevance_threshold),
    )


def mean_metrics(metrics: Sequence[QueryMetrics]) -> QueryMetrics:
    """Unweighted mean of per-query metrics (cutoff sets must agree)."""
    if not metrics:
        raise ValueError("no metrics to average")
    cutoffs = tuple(metrics[0].ndcg_at)
    for m in metrics:
        if tuple(m.ndcg_at) != cutoffs or tuple(m.precision_at) != cutoffs:
            raise ValueError("metrics were computed with different cutoffs")
    return QueryMetrics(
        ndcg_at={n: fmean(m.ndcg_at[n] for m in metrics) for n in cutoffs},
        precision_at={n: fmean(m.precision_at[n] for m in metrics) for n in cutoffs},
        average_precision=fmean(m.average_precision for m in metrics),
    )
