"""Scikit-learn estimator interface for the per-query-intercept ranker."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from .data import Record, validate_dataset
from .metrics import MetricConfig, evaluate_query, mean_metrics
from .model import ModelKind, prob_binary, prob_trinary, prob_trinary_alt
from .training import TrainConfig, fit

__all__ = ["QueryInterceptRanker"]


class QueryInterceptRanker(BaseEstimator):
    """Linear ranking model with one free intercept per training query.

    A single weight vector is shared across queries while each training
    query gets its own intercept (two for the three-level kinds), fitted
    jointly by maximum likelihood.  The intercepts absorb per-query shifts in
    the labeling criterion; prediction ranks rows by the linear score alone,
    so unseen queries need no intercept.

    Parameters
    ----------
    model_kind : str, default="binary"
        One of "binary", "trinary-cascade", "trinary-cascade-alt",
        "no-intercept-baseline".  Binary kinds expect labels {0, 1}, trinary
        kinds {0, 1, 2}.
    l2_penalty : float, default=1e-6
        Ridge strength on all parameters; keeps intercepts finite for
        queries with constant labels.
    grad_tolerance : float, default=1e-8
        Stop when the gradient infinity norm drops below this.
    max_iterations : int, default=500
        Cap on accepted optimizer steps.
    history_size : int, default=10
        Quasi-Newton memory length.

    Attributes
    ----------
    w_ : ndarray of shape (n_features,)
        Fitted weight vector.
    intercepts_ : dict
        Per-query intercepts seen during fit (empty for the baseline kind).
    shared_intercept_ : float or None
        The baseline kind's single intercept.
    result_ : FitResult
        Full optimizer outcome (trace, iterations, convergence flag).
    n_features_in_ : int
    """

    def __init__(
        self,
        model_kind: str = "binary",
        l2_penalty: float = 1e-6,
        grad_tolerance: float = 1e-8,
        max_iterations: int = 500,
        history_size: int = 10,
    ):
        self.model_kind = model_kind
        self.l2_penalty = l2_penalty
        self.grad_tolerance = grad_tolerance
        self.max_iterations = max_iterations
        self.history_size = history_size

    def _kind(self) -> ModelKind:
        return ModelKind.from_string(self.model_kind)

    def _query_ids(self, query_ids, n: int) -> list[str]:
        if query_ids is None:
            return ["0"] * n
        ids = [str(q) for q in query_ids]
        if len(ids) != n:
            raise ValueError(f"got {len(ids)} query ids for {n} rows")
        return ids

    def fit(self, X, y, query_ids=None):
        """Fit from a feature matrix, integer labels and per-row query ids.

        ``query_ids=None`` treats all rows as one query group.
        """
        X, y = check_X_y(X, y, dtype=np.float64)
        kind = self._kind()
        ids = self._query_ids(query_ids, X.shape[0])
        records = [
            Record(query_id=qid, label=int(label), features=tuple(map(float, row)))
            for qid, label, row in zip(ids, y, X)
        ]
        dataset = validate_dataset(records, levels=kind.levels)
        config = TrainConfig(
            l2_penalty=self.l2_penalty,
            grad_tolerance=self.grad_tolerance,
            max_iterations=self.max_iterations,
            history_size=self.history_size,
        )
        result = fit(dataset, kind, config)
        self.result_ = result
        self.w_ = result.params.w_array
        self.intercepts_ = dict(result.params.intercepts)
        self.shared_intercept_ = result.params.shared_intercept
        self.n_features_in_ = X.shape[1]
        return self

    def decision_function(self, X) -> np.ndarray:
        """Ranking scores: the linear score of each row."""
        check_is_fitted(self, "w_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(
                f"X has {X.shape[1]} features, expected {self.n_features_in_}"
            )
        return X @ self.w_

    def predict(self, X) -> np.ndarray:
        """Alias of decision_function: rankers predict scores, not labels."""
        return self.decision_function(X)

    def predict_proba(self, X, query_ids=None) -> np.ndarray:
        """Label probabilities, shape (n_rows, n_levels).

        Needs an intercept, so rows must belong to queries seen during fit
        (except for the baseline kind, whose intercept is shared).
        """
        check_is_fitted(self, "w_")
        X = check_array(X, dtype=np.float64)
        kind = self._kind()
        ids = self._query_ids(query_ids, X.shape[0])
        out = np.empty((X.shape[0], kind.levels))
        for i, (qid, row) in enumerate(zip(ids, X)):
            if kind is ModelKind.NO_INTERCEPT_BASELINE:
                theta = self.shared_intercept_
                out[i] = prob_binary(self.w_, theta, row)
                continue
            if qid not in self.intercepts_:
                raise ValueError(f"query {qid!r} was not seen during fit")
            value = self.intercepts_[qid]
            if kind is ModelKind.BINARY:
                out[i] = prob_binary(self.w_, value, row)
            elif kind is ModelKind.TRINARY_CASCADE:
                out[i] = prob_trinary(self.w_, value[0], value[1], row)
            else:
                out[i] = prob_trinary_alt(self.w_, value[0], value[1], row)
        return out

    def score(self, X, y, query_ids=None) -> float:
        """Mean average precision of the induced per-query rankings."""
        scores = self.decision_function(X)
        ids = self._query_ids(query_ids, X.shape[0])
        by_query: dict[str, list[int]] = {}
        for i, qid in enumerate(ids):
            by_query.setdefault(qid, []).append(i)
        config = MetricConfig(cutoffs=(1,))
        per_query = []
        for positions in by_query.values():
            group = [
                Record(query_id="*", label=int(y[i]), features=())
                for i in positions
            ]
            per_query.append(
                evaluate_query([float(scores[i]) for i in positions], group, config)
            )
        return mean_metrics(per_query).average_precision
