"""Probability models and ranking scores.

A result's value is the linear score ``w . phi``.  Labels are generated by
statistically comparing that value against per-query intercepts through the
logit link:

* binary:   P(1) = sigma(w.phi - theta),          P(0) = sigma(theta - w.phi)
* trinary cascade: compare against the high intercept first;
      P(2) = sigma(z_h),  P(1) = sigma(-z_h) * sigma(z_l),
      P(0) = sigma(-z_h) * sigma(-z_l),        with z_x = w.phi - theta_x
* alternative cascade: compare against the low intercept first;
      P(0) = sigma(-z_l), P(1) = sigma(z_l) * sigma(-z_h),
      P(2) = sigma(z_l) * sigma(z_h)

Each triple sums to one for any real intercept pair; no ordering between the
two intercepts is assumed.  Ranking within a query depends only on the linear
score, never on the intercepts, so test-time ranking needs only ``w``.
"""

from __future__ import annotations

from enum import Enum
from typing import Sequence

import numpy as np

from .data import ModelParams, Record

__all__ = [
    "ModelKind",
    "sigmoid",
    "log_sigmoid",
    "score",
    "prob_binary",
    "prob_trinary",
    "prob_trinary_alt",
    "rank_query",
    "rank_scores",
]


class ModelKind(Enum):
    """Which probability model generates the labels."""

    BINARY = "binary"
    TRINARY_CASCADE = "trinary-cascade"
    TRINARY_CASCADE_ALT = "trinary-cascade-alt"
    NO_INTERCEPT_BASELINE = "no-intercept-baseline"

    @classmethod
    def from_string(cls, name: str) -> "ModelKind":
        for kind in cls:
            if kind.value == name:
                return kind
        choices = ", ".join(k.value for k in cls)
        raise ValueError(f"unknown model kind {name!r} (choices: {choices})")

    @property
    def levels(self) -> int:
        """Number of ordinal levels this kind models (2 or 3)."""
        if self in (ModelKind.TRINARY_CASCADE, ModelKind.TRINARY_CASCADE_ALT):
            return 3
        return 2

    @property
    def intercepts_per_query(self) -> int:
        """Per-query intercept count; the baseline shares one across queries."""
        if self is ModelKind.NO_INTERCEPT_BASELINE:
            return 0
        return 2 if self.levels == 3 else 1


def sigmoid(x):
    """Numerically stable logistic function, elementwise.

    Only the negative-magnitude argument is exponentiated, so there is no
    overflow for any finite input.
    """
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out if out.ndim else float(out)


def log_sigmoid(x):
    """log(sigma(x)) = -log(1 + e^(-x)), computed without overflow."""
    result = -np.logaddexp(0.0, -np.asarray(x, dtype=np.float64))
    return result if result.ndim else float(result)


def score(w: Sequence[float], features: Sequence[float]) -> float:
    """Ranking score of a result: the inner product w . phi."""
    w = np.asarray(w, dtype=np.float64)
    phi = np.asarray(features, dtype=np.float64)
    if w.shape != phi.shape:
        raise ValueError(f"length mismatch: w has {w.shape[0]}, features {phi.shape[0]}")
    return float(w @ phi)


def prob_binary(
    w: Sequence[float], theta: float, features: Sequence[float]
) -> tuple[float, float]:
    """(P(label=0), P(label=1)) under the binary logit model."""
    z = score(w, features) - theta
    return sigmoid(-z), sigmoid(z)


def _log_prob_trinary(z_high, z_low):
    """Log-probabilities (lp0, lp1, lp2) of the high-first cascade."""
    lp2 = log_sigmoid(z_high)
    lp1 = log_sigmoid(-z_high) + log_sigmoid(z_low)
    lp0 = log_sigmoid(-z_high) + log_sigmoid(-z_low)
    return lp0, lp1, lp2


def _log_prob_trinary_alt(z_high, z_low):
    """Log-probabilities (lp0, lp1, lp2) of the low-first cascade."""
    lp0 = log_sigmoid(-z_low)
    lp1 = log_sigmoid(z_low) + log_sigmoid(-z_high)
    lp2 = log_sigmoid(z_low) + log_sigmoid(z_high)
    return lp0, lp1, lp2


def prob_trinary(
    w: Sequence[float], theta_high: float, theta_low: float, features: Sequence[float]
) -> tuple[float, float, float]:
    """(P0, P1, P2) under the high-first cascade.

    Computed in log space and exponentiated on output; valid for any real
    intercept pair, ordered or not.
    """
    z = score(w, features)
    lp0, lp1, lp2 = _log_prob_trinary(z - theta_high, z - theta_low)
    return float(np.exp(lp0)), float(np.exp(lp1)), float(np.exp(lp2))


def prob_trinary_alt(
    w: Sequence[float], theta_high: float, theta_low: float, features: Sequence[float]
) -> tuple[float, float, float]:
    """(P0, P1, P2) under the low-first cascade."""
    z = score(w, features)
    lp0, lp1, lp2 = _log_prob_trinary_alt(z - theta_high, z - theta_low)
    return float(np.exp(lp0)), float(np.exp(lp1)), float(np.exp(lp2))


def rank_scores(scores: Sequence[float]) -> list[int]:
    """Indices sorted by descending score; ties keep original order."""
    arr = np.asarray(scores, dtype=np.float64)
    return np.argsort(-arr, kind="stable").tolist()


def rank_query(params: ModelParams, group: Sequence[Record]) -> list[int]:
    """Rank one query's records by descending linear score.

    The intercepts in ``params`` are deliberately never read: the returned
    permutation is a function of ``w`` and the feature vectors alone.
    """
    if not group:
        raise ValueError("empty group")
    qid = group[0].query_id
    if any(r.query_id != qid for r in group):
        raise ValueError("group mixes records from different queries")
    scores = [score(params.w, r.features) for r in group]
    return rank_scores(scores)
