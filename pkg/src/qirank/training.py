"""Maximum-likelihood fitting of the ranking models.

The penalized objective is

    NLL(w, theta) = -sum_ij log P(L_ij | w, theta_i)  +  (l2/2) * ||all params||^2

minimized over the flat parameter vector  [w (k entries), then intercepts in
ascending query-id order, high before low for trinary kinds; the baseline
kind has a single shared intercept after w].  The objective is smooth and
convex, so a deterministic full-batch limited-memory quasi-Newton loop with
a backtracking (sufficient-decrease) line search is used, started from zeros.
The small default ridge keeps intercepts finite for queries whose labels are
constant; it perturbs the weight vector negligibly and may be set to zero.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .data import Dataset, ModelParams
from .model import ModelKind, log_sigmoid, sigmoid

__all__ = [
    "TrainingError",
    "TrainConfig",
    "FitResult",
    "negative_log_likelihood",
    "gradient",
    "fit",
    "SavedModel",
    "save_model",
    "load_model",
]

_ARMIJO_C1 = 1e-4
_BACKTRACK_FACTOR = 0.5
_MAX_BACKTRACKS = 60


class TrainingError(ValueError):
    """Inconsistent fitting inputs, or a non-finite objective."""


@dataclass(frozen=True)
class TrainConfig:
    """Optimizer settings.

    ``grad_tolerance`` applies to the infinity norm of the penalized
    gradient; ``history_size`` is the quasi-Newton memory length.
    """

    l2_penalty: float = 1e-6
    grad_tolerance: float = 1e-8
    max_iterations: int = 500
    history_size: int = 10

    def __post_init__(self) -> None:
        if self.l2_penalty < 0:
            raise TrainingError("l2_penalty must be >= 0")
        if self.grad_tolerance <= 0:
            raise TrainingError("grad_tolerance must be > 0")
        if self.max_iterations <= 0:
            raise TrainingError("max_iterations must be > 0")
        if self.history_size <= 0:
            raise TrainingError("history_size must be > 0")


@dataclass(frozen=True)
class FitResult:
    """Fit outcome; ``nll_trace`` holds the objective at the start and after
    every accepted step, and never increases."""

    params: ModelParams
    final_nll: float
    iterations: int
    converged: bool
    nll_trace: tuple[float, ...]


@dataclass(frozen=True)
class _Layout:
    """Fixed flat ordering of the parameter vector for one (dataset, kind)."""

    kind: ModelKind
    k: int
    query_ids: tuple[str, ...]  # ascending

    @property
    def size(self) -> int:
        return self.k + self.n_intercepts

    @property
    def n_intercepts(self) -> int:
        if self.kind is ModelKind.NO_INTERCEPT_BASELINE:
            return 1
        return self.kind.intercepts_per_query * len(self.query_ids)

    def pack(self, params: ModelParams) -> np.ndarray:
        if params.k != self.k:
            raise TrainingError(f"params have {params.k} weights, dataset has {self.k} features")
        vec = np.zeros(self.size)
        vec[: self.k] = params.w
        if self.kind is ModelKind.NO_INTERCEPT_BASELINE:
            if params.shared_intercept is None:
                raise TrainingError("baseline params need a shared intercept")
            vec[self.k] = params.shared_intercept
            return vec
        if set(params.intercepts) != set(self.query_ids):
            missing = sorted(set(self.query_ids) - set(params.intercepts))
            extra = sorted(set(params.intercepts) - set(self.query_ids))
            raise TrainingError(
                f"intercept keys do not match dataset queries (missing {missing}, extra {extra})"
            )
        per = self.kind.intercepts_per_query
        for pos, qid in enumerate(self.query_ids):
            value = params.intercepts[qid]
            if per == 1:
                if isinstance(value, tuple):
                    raise TrainingError(f"query {qid!r}: expected a single intercept")
                vec[self.k + pos] = value
            else:
                if not (isinstance(value, tuple) and len(value) == 2):
                    raise TrainingError(f"query {qid!r}: expected a (high, low) intercept pair")
                vec[self.k + 2 * pos] = value[0]
                vec[self.k + 2 * pos + 1] = value[1]
        return vec

    def unpack(self, vec: np.ndarray) -> ModelParams:
        w = tuple(float(v) for v in vec[: self.k])
        if self.kind is ModelKind.NO_INTERCEPT_BASELINE:
            return ModelParams(w=w, intercepts={}, shared_intercept=float(vec[self.k]))
        intercepts: dict[str, float | tuple[float, float]] = {}
        if self.kind.intercepts_per_query == 1:
            for pos, qid in enumerate(self.query_ids):
                intercepts[qid] = float(vec[self.k + pos])
        else:
            for pos, qid in enumerate(self.query_ids):
                intercepts[qid] = (
                    float(vec[self.k + 2 * pos]),
                    float(vec[self.k + 2 * pos + 1]),
                )
        return ModelParams(w=w, intercepts=intercepts)


def _layout_for(dataset: Dataset, kind: ModelKind) -> _Layout:
    return _Layout(kind=kind, k=dataset.k, query_ids=tuple(sorted(dataset.query_index)))


def _check_kind(dataset: Dataset, kind: ModelKind) -> None:
    if dataset.scale.levels != kind.levels:
        raise TrainingError(
            f"model kind {kind.value!r} needs a {kind.levels}-level scale, "
            f"dataset has {dataset.scale.levels}"
        )


class _Objective:
    """Vectorized penalized NLL and analytic gradient over a flat vector."""

    def __init__(self, dataset: Dataset, kind: ModelKind, l2: float, layout: _Layout):
        self.kind = kind
        self.l2 = l2
        self.layout = layout
        self.x_mat = dataset.feature_matrix
        self.y = dataset.label_array
        qid_to_pos = {qid: pos for pos, qid in enumerate(layout.query_ids)}
        self.qcodes = np.array(
            [qid_to_pos[r.query_id] for r in dataset.records], dtype=np.int64
        )
        self.n_queries = len(layout.query_ids)

    def _z_pair(self, vec: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        k = self.layout.k
        z = self.x_mat @ vec[:k]
        theta_h = vec[k + 2 * self.qcodes]
        theta_l = vec[k + 2 * self.qcodes + 1]
        return z - theta_h, z - theta_l

    def _z_single(self, vec: np.ndarray) -> np.ndarray:
        k = self.layout.k
        z = self.x_mat @ vec[:k]
        if self.kind is ModelKind.NO_INTERCEPT_BASELINE:
            return z - vec[k]
        return z - vec[k + self.qcodes]

    def value(self, vec: np.ndarray) -> float:
        if self.kind in (ModelKind.BINARY, ModelKind.NO_INTERCEPT_BASELINE):
            zz = self._z_single(vec)
            signs = 2.0 * self.y - 1.0
            data = -log_sigmoid(signs * zz).sum()
        elif self.kind is ModelKind.TRINARY_CASCADE:
            zh, zl = self._z_pair(vec)
            low_term = np.where(self.y == 1, -log_sigmoid(zl), -log_sigmoid(-zl))
            data = np.where(
                self.y == 2, -log_sigmoid(zh), -log_sigmoid(-zh) + low_term
            ).sum()
        else:
            zh, zl = self._z_pair(vec)
            high_term = np.where(self.y == 2, -log_sigmoid(zh), -log_sigmoid(-zh))
            data = np.where(
                self.y == 0, -log_sigmoid(-zl), -log_sigmoid(zl) + high_term
            ).sum()
        return float(data + 0.5 * self.l2 * (vec @ vec))

    def grad(self, vec: np.ndarray) -> np.ndarray:
        k = self.layout.k
        out = np.empty(self.layout.size)
        if self.kind in (ModelKind.BINARY, ModelKind.NO_INTERCEPT_BASELINE):
            zz = self._z_single(vec)
            d = sigmoid(zz) - self.y  # d(nll)/dz per record
            out[:k] = self.x_mat.T @ d
            if self.kind is ModelKind.NO_INTERCEPT_BASELINE:
                out[k] = -d.sum()
            else:
                out[k:] = -np.bincount(self.qcodes, weights=d, minlength=self.n_queries)
        else:
            zh, zl = self._z_pair(vec)
            if self.kind is ModelKind.TRINARY_CASCADE:
                dh = sigmoid(zh) - (self.y == 2)
                dl = np.where(self.y == 2, 0.0, sigmoid(zl) - (self.y == 1))
            else:
                dl = sigmoid(zl) - (self.y >= 1)
                dh = np.where(self.y == 0, 0.0, sigmoid(zh) - (self.y == 2))
            out[:k] = self.x_mat.T @ (dh + dl)
            out[k::2] = -np.bincount(self.qcodes, weights=dh, minlength=self.n_queries)
            out[k + 1 :: 2] = -np.bincount(self.qcodes, weights=dl, minlength=self.n_queries)
        out += self.l2 * vec
        return out


def negative_log_likelihood(
    params: ModelParams, dataset: Dataset, kind: ModelKind, l2: float = 0.0
) -> float:
    """Penalized negative log-likelihood of the dataset under ``params``.

    Computed from log-space probabilities throughout; never the log of an
    exponentiated probability.
    """
    _check_kind(dataset, kind)
    layout = _layout_for(dataset, kind)
    objective = _Objective(dataset, kind, l2, layout)
    return objective.value(layout.pack(params))


def gradient(
    params: ModelParams, dataset: Dataset, kind: ModelKind, l2: float = 0.0
) -> np.ndarray:
    """Analytic gradient of the penalized objective, in flat layout order."""
    _check_kind(dataset, kind)
    layout = _layout_for(dataset, kind)
    objective = _Objective(dataset, kind, l2, layout)
    return objective.grad(layout.pack(params))


def _lbfgs_direction(
    g: np.ndarray, s_hist: list[np.ndarray], y_hist: list[np.ndarray], rho: list[float]
) -> np.ndarray:
    """Two-loop recursion; returns the quasi-Newton descent direction."""
    if not s_hist:
        return -g
    q = g.copy()
    alphas = []
    for s, y, r in zip(reversed(s_hist), reversed(y_hist), reversed(rho)):
        a = r * (s @ q)
        alphas.append(a)
        q -= a * y
    q *= (s_hist[-1] @ y_hist[-1]) / (y_hist[-1] @ y_hist[-1])
    for (s, y, r), a in zip(zip(s_hist, y_hist, rho), reversed(alphas)):
        b = r * (y @ q)
        q += (a - b) * s
    return -q


def fit(dataset: Dataset, kind: ModelKind, config: TrainConfig = TrainConfig()) -> FitResult:
    """Fit model parameters by maximum likelihood.

    Deterministic for identical inputs: all-zero initialization, full-batch
    objective, and a fixed backtracking rule.  Stops when the gradient
    infinity norm drops below ``config.grad_tolerance``, when
    ``config.max_iterations`` accepted steps have been taken, or when the
    line search cannot reduce the objective any further in float precision.
    """
    _check_kind(dataset, kind)
    layout = _layout_for(dataset, kind)
    objective = _Objective(dataset, kind, config.l2_penalty, layout)

    x = np.zeros(layout.size)
    f = objective.value(x)
    g = objective.grad(x)
    if not (math.isfinite(f) and np.all(np.isfinite(g))):
        raise TrainingError("non-finite objective at iteration 0")

    trace = [f]
    s_hist: list[np.ndarray] = []
    y_hist: list[np.ndarray] = []
    rho: list[float] = []
    iterations = 0
    converged = bool(np.max(np.abs(g)) < config.grad_tolerance) if g.size else True

    while not converged and iterations < config.max_iterations:
        d = _lbfgs_direction(g, s_hist, y_hist, rho)
        slope = float(g @ d)
        if slope >= 0.0:  # history produced a non-descent direction; reset
            d = -g
            slope = -float(g @ g)
            s_hist.clear()
            y_hist.clear()
            rho.clear()

        alpha = 1.0 if s_hist else min(1.0, 1.0 / float(np.max(np.abs(g))))
        accepted = False
        for _ in range(_MAX_BACKTRACKS):
            x_new = x + alpha * d
            if np.array_equal(x_new, x):
                break  # step underflows against x; nothing smaller can move it
            f_new = objective.value(x_new)
            if math.isfinite(f_new) and f_new <= f + _ARMIJO_C1 * alpha * slope:
                accepted = True
                break
            alpha *= _BACKTRACK_FACTOR
        if not accepted:
            break  # no further float-precision descent along any tried step

        g_new = objective.grad(x_new)
        if not (math.isfinite(f_new) and np.all(np.isfinite(g_new))):
            raise TrainingError(f"non-finite objective at iteration {iterations + 1}")

        s = x_new - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-12 * float(np.linalg.norm(s)) * float(np.linalg.norm(y)):
            s_hist.append(s)
            y_hist.append(y)
            rho.append(1.0 / sy)
            if len(s_hist) > config.history_size:
                s_hist.pop(0)
                y_hist.pop(0)
                rho.pop(0)

        x, f, g = x_new, f_new, g_new
        trace.append(f)
        iterations += 1
        converged = bool(np.max(np.abs(g)) < config.grad_tolerance)

    return FitResult(
        params=layout.unpack(x),
        final_nll=f,
        iterations=iterations,
        converged=converged,
        nll_trace=tuple(trace),
    )


@dataclass(frozen=True)
class SavedModel:
    params: ModelParams
    kind: ModelKind
    config: TrainConfig


def save_model(
    path: str | Path, params: ModelParams, kind: ModelKind, config: TrainConfig
) -> None:
    """Serialize a fitted model as JSON; floats round-trip exactly."""
    doc: dict = {
        "kind": kind.value,
        "k": params.k,
        "w": list(params.w),
        "intercepts": {
            qid: (list(v) if isinstance(v, tuple) else v)
            for qid, v in sorted(params.intercepts.items())
        },
        "config": {
            "l2_penalty": config.l2_penalty,
            "grad_tolerance": config.grad_tolerance,
            "max_iterations": config.max_iterations,
            "history_size": config.history_size,
        },
    }
    if params.shared_intercept is not None:
        doc["shared_intercept"] = params.shared_intercept
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path: str | Path) -> SavedModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    kind = ModelKind.from_string(doc["kind"])
    intercepts: dict[str, float | tuple[float, float]] = {}
    for qid, value in doc.get("intercepts", {}).items():
        if isinstance(value, list):
            if len(value) != 2:
                raise ValueError(f"query {qid!r}: intercept pair must have 2 entries")
            intercepts[qid] = (float(value[0]), float(value[1]))
        else:
            intercepts[qid] = float(value)
    w = tuple(float(v) for v in doc["w"])
    if len(w) != doc["k"]:
        raise ValueError(f"w has {len(w)} entries but k = {doc['k']}")
    shared = doc.get("shared_intercept")
    params = ModelParams(
        w=w,
        intercepts=intercepts,
        shared_intercept=None if shared is None else float(shared),
    )
    cfg = doc.get("config", {})
    config = TrainConfig(
        l2_penalty=cfg.get("l2_penalty", 1e-6),
        grad_tolerance=cfg.get("grad_tolerance", 1e-8),
        max_iterations=cfg.get("max_iterations", 500),
        history_size=cfg.get("history_size", 10),
    )
    return SavedModel(params=params, kind=kind, config=config)
