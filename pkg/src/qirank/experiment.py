"""Five-fold experiment protocol, synthetic data generation and reporting.

A fold is trained on its train file only (the validation file must exist but
is never read), the test file is scored with the fitted weight vector alone,
and per-query metrics are averaged without weighting.  Across the five folds
the report shows mean and sample standard deviation (divisor n-1) of each
metric, next to the static scoreboard rows for the matching collection.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import baselines
from .data import Dataset, ModelParams, Record, validate_dataset
from .letor import FoldSpec, discover_folds, parse_file, record_line, write_scores
from .metrics import MetricConfig, QueryMetrics, evaluate_query, mean_metrics
from .model import ModelKind, sigmoid
from .training import FitResult, TrainConfig, fit

__all__ = [
    "ExperimentError",
    "ExperimentConfig",
    "FoldOutcome",
    "AggregateReport",
    "normalize_records",
    "evaluate_records",
    "run_fold",
    "run_experiment",
    "emit_report",
    "synthetic_query_ids",
    "generate_synthetic",
    "write_synthetic_folds",
    "AblationFold",
    "run_synthetic_ablation",
]


class ExperimentError(RuntimeError):
    """A fold or the experiment protocol failed."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings for one 5-fold run.

    ``folds`` overrides discovery under ``dataset_root`` when given.
    ``dataset_name`` selects the static scoreboard rows attached to the
    report ("ohsumed", "td2003", "td2004"); None attaches no baselines.
    ``seed`` is used only by synthetic-data paths.
    """

    dataset_root: Path | None = None
    folds: tuple[FoldSpec, ...] | None = None
    model_kind: ModelKind = ModelKind.BINARY
    train: TrainConfig = TrainConfig()
    metrics: MetricConfig = MetricConfig()
    normalize_features: bool = False
    dataset_name: str | None = None
    seed: int = 0
    output_dir: Path | None = None


@dataclass(frozen=True)
class FoldOutcome:
    fold_id: int
    per_query: tuple[tuple[str, QueryMetrics], ...]
    average: QueryMetrics
    converged: bool
    final_nll: float
    iterations: int


@dataclass(frozen=True)
class AggregateReport:
    model_kind: ModelKind
    cutoffs: tuple[int, ...]
    relevance_threshold: int
    dataset_name: str | None
    folds: tuple[FoldOutcome, ...]
    mean: QueryMetrics
    stdev: QueryMetrics


def normalize_records(records: Sequence[Record]) -> list[Record]:
    """Per-query min-max scaling of every feature, file order preserved.

    Each query group is scaled with its own minima and maxima; a feature that
    is constant within a query becomes 0 there.
    """
    by_query: dict[str, list[int]] = {}
    for i, rec in enumerate(records):
        by_query.setdefault(rec.query_id, []).append(i)
    out: list[Record | None] = [None] * len(records)
    for positions in by_query.values():
        mat = np.array([records[i].features for i in positions], dtype=np.float64)
        lo = mat.min(axis=0)
        span = mat.max(axis=0) - lo
        safe = np.where(span > 0, span, 1.0)
        scaled = np.where(span > 0, (mat - lo) / safe, 0.0)
        for row, i in enumerate(positions):
            out[i] = replace(records[i], features=tuple(float(v) for v in scaled[row]))
    return out  # type: ignore[return-value]


def evaluate_records(
    records: Sequence[Record],
    scores: Sequence[float],
    config: MetricConfig = MetricConfig(),
) -> list[tuple[str, QueryMetrics]]:
    """Group records by query (first-appearance order) and evaluate each."""
    if len(scores) != len(records):
        raise ValueError(f"got {len(scores)} scores for {len(records)} records")
    by_query: dict[str, list[int]] = {}
    for i, rec in enumerate(records):
        by_query.setdefault(rec.query_id, []).append(i)
    results = []
    for qid, positions in by_query.items():
        group = [records[i] for i in positions]
        group_scores = [float(scores[i]) for i in positions]
        results.append((qid, evaluate_query(group_scores, group, config)))
    return results


def run_fold(fold: FoldSpec, config: ExperimentConfig) -> FoldOutcome:
    """Train on the fold's train file, score and evaluate its test file.

    A fit that stops before reaching the gradient tolerance is reported via
    the ``converged`` flag; metrics are still computed.
    """
    fold.check_readable()
    train_records = parse_file(fold.train_path)
    test_records = parse_file(fold.test_path)
    if config.normalize_features:
        train_records = normalize_records(train_records)
        test_records = normalize_records(test_records)

    levels = config.model_kind.levels
    train = validate_dataset(train_records, levels=levels)
    result = fit(train, config.model_kind, config.train)

    w = result.params.w_array
    scores = [
        float(np.dot(w, np.asarray(rec.features, dtype=np.float64)))
        for rec in test_records
    ]
    if config.output_dir is not None:
        out_dir = Path(config.output_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        write_scores(test_records, scores, out_dir / f"fold{fold.fold_id}.scores.txt")

    per_query = evaluate_records(test_records, scores, config.metrics)
    return FoldOutcome(
        fold_id=fold.fold_id,
        per_query=tuple(per_query),
        average=mean_metrics([qm for _, qm in per_query]),
        converged=result.converged,
        final_nll=result.final_nll,
        iterations=result.iterations,
    )


def run_experiment(config: ExperimentConfig) -> AggregateReport:
    """Run all five folds and aggregate fold averages (mean, sample stdev)."""
    if config.folds is not None:
        folds = config.folds
    elif config.dataset_root is not None:
        folds = discover_folds(config.dataset_root)
    else:
        raise ExperimentError("either dataset_root or explicit folds are required")
    if len(folds) != 5:
        raise ExperimentError(f"expected 5 folds, got {len(folds)}")

    outcomes = []
    for spec in folds:
        try:
            outcomes.append(run_fold(spec, config))
        except ExperimentError:
            raise
        except Exception as exc:
            raise ExperimentError(f"fold {spec.fold_id}: {exc}") from exc

    cutoffs = config.metrics.cutoffs
    averages = [o.average for o in outcomes]
    mean = mean_metrics(averages)
    stdev = QueryMetrics(
        ndcg_at={n: statistics.stdev(a.ndcg_at[n] for a in averages) for n in cutoffs},
        precision_at={
            n: statistics.stdev(a.precision_at[n] for a in averages) for n in cutoffs
        },
        average_precision=statistics.stdev(a.average_precision for a in averages),
    )
    return AggregateReport(
        model_kind=config.model_kind,
        cutoffs=cutoffs,
        relevance_threshold=config.metrics.relevance_threshold,
        dataset_name=config.dataset_name,
        folds=tuple(outcomes),
        mean=mean,
        stdev=stdev,
    )


def _cell(mean: float, stdev: float) -> str:
    return f"{mean:.3f} ± {stdev:.3f}"


def _method_rows(report: AggregateReport) -> tuple[list[str], dict[str, dict[str, tuple[float, float] | None]]]:
    """Rows keyed by method; columns 'ndcg@n', 'p@n', 'map'; None = no value."""
    columns = (
        [f"ndcg@{n}" for n in report.cutoffs]
        + [f"p@{n}" for n in report.cutoffs]
        + ["map"]
    )
    rows: dict[str, dict[str, tuple[float, float] | None]] = {}
    this_row: dict[str, tuple[float, float] | None] = {}
    for n in report.cutoffs:
        this_row[f"ndcg@{n}"] = (report.mean.ndcg_at[n], report.stdev.ndcg_at[n])
        this_row[f"p@{n}"] = (report.mean.precision_at[n], report.stdev.precision_at[n])
    this_row["map"] = (report.mean.average_precision, report.stdev.average_precision)
    rows["This"] = this_row

    if report.dataset_name is not None:
        name = report.dataset_name.lower()
        if name not in baselines.TABLES:
            raise ValueError(
                f"unknown dataset {report.dataset_name!r} (choices: {', '.join(baselines.DATASETS)})"
            )
        ndcg = baselines.baseline_cells(name, "ndcg")
        precision = baselines.baseline_cells(name, "precision")
        ap = baselines.baseline_cells(name, "map")
        for method in baselines.BASELINE_METHODS:
            row: dict[str, tuple[float, float] | None] = {}
            for n in report.cutoffs:
                row[f"ndcg@{n}"] = ndcg[method].get(n)
                row[f"p@{n}"] = precision[method].get(n)
            row["map"] = ap[method]
            rows[method] = row
    return columns, rows


def _best_means(columns: Iterable[str], rows: dict) -> dict[str, float | None]:
    """Per column: best 3-decimal mean, or None when under two rows have values."""
    best: dict[str, float | None] = {}
    for col in columns:
        values = [round(row[col][0], 3) for row in rows.values() if row[col] is not None]
        best[col] = max(values) if len(values) >= 2 else None
    return best


def emit_report(report: AggregateReport, format: str = "markdown") -> str:
    """Render the aggregate report as a byte-deterministic text document."""
    if format not in ("csv", "markdown"):
        raise ValueError(f"unknown report format {format!r}")
    if not report.folds:
        raise ValueError("report has no fold metrics")
    columns, rows = _method_rows(report)

    if format == "csv":
        lines = ["method," + ",".join(columns)]
        for method, row in rows.items():
            cells = [_cell(*row[c]) if row[c] is not None else "" for c in columns]
            lines.append(method + "," + ",".join(cells))
        return "\n".join(lines) + "\n"

    best = _best_means(columns, rows)

    def render(metric_cols: list[str], header: list[str]) -> list[str]:
        out = ["| Method | " + " | ".join(header) + " |"]
        out.append("|" + "---|" * (len(header) + 1))
        for method, row in rows.items():
            cells = []
            for col in metric_cols:
                if row[col] is None:
                    cells.append("")
                    continue
                text = _cell(*row[col])
                if best[col] is not None and round(row[col][0], 3) == best[col]:
                    text = f"**{text}**"
                cells.append(text)
            out.append(f"| {method} | " + " | ".join(cells) + " |")
        return out

    title = report.dataset_name.upper() if report.dataset_name else "Ranking experiment"
    lines = [f"# {title}: 5-fold results", ""]
    lines.append(
        f"Model: {report.model_kind.value} | relevance threshold: "
        f"{report.relevance_threshold} | stdev: sample (n-1) over folds"
    )
    lines.append("")
    lines.append("## Folds")
    lines.append("")
    lines.append("| Fold | MAP | Final NLL | Iterations | Converged |")
    lines.append("|---|---|---|---|---|")
    for o in report.folds:
        lines.append(
            f"| {o.fold_id} | {o.average.average_precision:.3f} | {o.final_nll:.6f} "
            f"| {o.iterations} | {'yes' if o.converged else 'NO'} |"
        )
    if not all(o.converged for o in report.folds):
        bad = ", ".join(str(o.fold_id) for o in report.folds if not o.converged)
        lines.append("")
        lines.append(f"Warning: fit did not reach the gradient tolerance on folds {bad}.")
    header = [f"@{n}" for n in report.cutoffs]
    lines += ["", "## NDCG", ""]
    lines += render([f"ndcg@{n}" for n in report.cutoffs], header)
    lines += ["", "## Precision", ""]
    lines += render([f"p@{n}" for n in report.cutoffs], header)
    lines += ["", "## MAP", ""]
    lines += render(["map"], ["MAP"])
    return "\n".join(lines) + "\n"


def synthetic_query_ids(n_queries: int) -> list[str]:
    """Zero-padded ids so lexicographic and numeric order agree."""
    width = max(3, len(str(n_queries)))
    return [f"q{i:0{width}d}" for i in range(1, n_queries + 1)]


def generate_synthetic(
    n_queries: int,
    results_per_query: int,
    k: int,
    kind: ModelKind = ModelKind.BINARY,
    seed: int | np.random.SeedSequence = 0,
    true_params: ModelParams | None = None,
) -> tuple[Dataset, ModelParams]:
    """Draw a dataset from the exact probability model; reproducible by seed.

    Unless ``true_params`` is supplied, weights and intercepts are drawn
    uniformly from [-1, 1] (trinary high intercepts sit a uniform [0.5, 1.5]
    gap above the low ones).  Features are uniform on [-1, 1]; each label is
    sampled from the model's exact distribution at the record's score.
    """
    if n_queries < 1 or results_per_query < 1 or k < 1:
        raise ValueError("sizes must be positive")
    rng = np.random.default_rng(seed)
    qids = synthetic_query_ids(n_queries)

    if true_params is None:
        w = rng.uniform(-1.0, 1.0, size=k)
        if kind is ModelKind.NO_INTERCEPT_BASELINE:
            shared = float(rng.uniform(-1.0, 1.0))
            true_params = ModelParams(w=tuple(w), intercepts={}, shared_intercept=shared)
        elif kind.intercepts_per_query == 1:
            thetas = rng.uniform(-1.0, 1.0, size=n_queries)
            true_params = ModelParams(
                w=tuple(w), intercepts={q: float(t) for q, t in zip(qids, thetas)}
            )
        else:
            low = rng.uniform(-1.0, 1.0, size=n_queries)
            high = low + rng.uniform(0.5, 1.5, size=n_queries)
            true_params = ModelParams(
                w=tuple(w),
                intercepts={q: (float(h), float(l)) for q, h, l in zip(qids, high, low)},
            )
    else:
        if true_params.k != k:
            raise ValueError(f"true_params have {true_params.k} weights, expected {k}")
        if kind is not ModelKind.NO_INTERCEPT_BASELINE and set(true_params.intercepts) != set(qids):
            raise ValueError("true_params intercept keys must match the generated query ids")

    n_records = n_queries * results_per_query
    features = rng.uniform(-1.0, 1.0, size=(n_records, k))
    u = rng.random(n_records)
    z = features @ true_params.w_array

    if kind is ModelKind.NO_INTERCEPT_BASELINE:
        zz = z - true_params.shared_intercept
        labels = (u < sigmoid(zz)).astype(int)
    elif kind is ModelKind.BINARY:
        theta = np.array([true_params.intercepts[q] for q in qids])
        zz = z - np.repeat(theta, results_per_query)
        labels = (u < sigmoid(zz)).astype(int)
    else:
        high = np.array([true_params.intercepts[q][0] for q in qids])
        low = np.array([true_params.intercepts[q][1] for q in qids])
        zh = z - np.repeat(high, results_per_query)
        zl = z - np.repeat(low, results_per_query)
        if kind is ModelKind.TRINARY_CASCADE:
            p0 = sigmoid(-zh) * sigmoid(-zl)
            p1 = sigmoid(-zh) * sigmoid(zl)
        else:
            p0 = sigmoid(-zl)
            p1 = sigmoid(zl) * sigmoid(-zh)
        labels = np.where(u < p0, 0, np.where(u < p0 + p1, 1, 2))

    records = [
        Record(
            query_id=qids[i // results_per_query],
            label=int(labels[i]),
            features=tuple(float(v) for v in features[i]),
        )
        for i in range(n_records)
    ]
    dataset = validate_dataset(records, levels=kind.levels)
    return dataset, true_params


def _split_records(
    dataset: Dataset, query_sets: Sequence[set[str]]
) -> list[list[Record]]:
    parts: list[list[Record]] = [[] for _ in query_sets]
    for rec in dataset.records:
        for part, qset in zip(parts, query_sets):
            if rec.query_id in qset:
                part.append(rec)
                break
    return parts


def write_synthetic_folds(
    root: str | Path,
    n_train_queries: int = 40,
    n_test_queries: int = 20,
    results_per_query: int = 20,
    k: int = 10,
    kind: ModelKind = ModelKind.BINARY,
    seed: int = 0,
) -> Path:
    """Emit a Fold1..Fold5 tree of synthetic LETOR files under ``root``.

    Each fold draws its own hidden weight vector; train, validation and test
    hold disjoint query sets.  Output is byte-deterministic for a seed.
    """
    root = Path(root)
    children = np.random.SeedSequence(seed).spawn(5)
    n_total = n_train_queries + 2 * n_test_queries
    for fold_id, child in enumerate(children, start=1):
        dataset, _ = generate_synthetic(
            n_total, results_per_query, k, kind=kind, seed=child
        )
        qids = synthetic_query_ids(n_total)
        train_q = set(qids[:n_train_queries])
        vali_q = set(qids[n_train_queries : n_train_queries + n_test_queries])
        test_q = set(qids[n_train_queries + n_test_queries :])
        parts = _split_records(dataset, [train_q, vali_q, test_q])
        fold_dir = root / f"Fold{fold_id}"
        fold_dir.mkdir(parents=True, exist_ok=True)
        for name, recs in zip(("train.txt", "vali.txt", "test.txt"), parts):
            with open(fold_dir / name, "w", encoding="utf-8", newline="\n") as fh:
                for rec in recs:
                    fh.write(record_line(rec))
                    fh.write("\n")
    return root


@dataclass(frozen=True)
class AblationFold:
    fold_id: int
    map_per_query_intercepts: float
    map_shared_intercept: float


def _heterogeneous_query_records(
    rng: np.random.Generator,
    qids: Sequence[str],
    results_per_query: int,
    k: int,
    intercept_spread: float,
    center_scale: float,
) -> tuple[list[Record], ModelParams]:
    """Binary data whose per-query intercepts track query feature location.

    Each query's intercept is uniform on [-spread, +spread] and its feature
    cloud is shifted along a direction orthogonal to the true weights by an
    amount proportional to that intercept (strict judges see offset feature
    pools).  A shared-intercept fit absorbs the shift into the weight vector
    and loses within-query ranking accuracy; per-query intercepts absorb it
    exactly.  Labels still come from the exact binary model.
    """
    n = len(qids)
    w = rng.uniform(-1.0, 1.0, size=k)
    raw = rng.uniform(-1.0, 1.0, size=k)
    orth = raw - (raw @ w) / (w @ w) * w
    if np.linalg.norm(orth) < 1e-9:  # raw parallel to w; any orthogonal axis works
        basis = np.zeros(k)
        basis[int(np.argmin(np.abs(w)))] = 1.0
        orth = basis - (basis @ w) / (w @ w) * w
    v = orth / np.linalg.norm(orth)

    thetas = rng.uniform(-intercept_spread, intercept_spread, size=n)
    base_centers = rng.uniform(-0.5, 0.5, size=(n, k))
    centers = base_centers + np.outer(
        center_scale * thetas / intercept_spread, v
    )
    noise = rng.uniform(-1.0, 1.0, size=(n * results_per_query, k))
    features = np.repeat(centers, results_per_query, axis=0) + noise
    z = features @ w - np.repeat(thetas, results_per_query)
    labels = (rng.random(n * results_per_query) < sigmoid(z)).astype(int)
    records = [
        Record(
            query_id=qids[i // results_per_query],
            label=int(labels[i]),
            features=tuple(float(x) for x in features[i]),
        )
        for i in range(n * results_per_query)
    ]
    params = ModelParams(
        w=tuple(float(x) for x in w),
        intercepts={q: float(t) for q, t in zip(qids, thetas)},
    )
    return records, params


def run_synthetic_ablation(
    n_folds: int = 5,
    n_train_queries: int = 60,
    n_test_queries: int = 40,
    results_per_query: int = 20,
    k: int = 5,
    intercept_spread: float = 3.0,
    center_scale: float = 1.0,
    seed: int = 0,
    train: TrainConfig = TrainConfig(),
) -> list[AblationFold]:
    """Compare test MAP of the per-query-intercept model against plain
    logistic regression with one shared intercept, on synthetic folds with
    heterogeneous per-query intercepts spread uniformly over
    [-intercept_spread, +intercept_spread].
    """
    outcomes = []
    config = MetricConfig()
    n_total = n_train_queries + n_test_queries
    qids = synthetic_query_ids(n_total)
    for fold_id, child in enumerate(np.random.SeedSequence(seed).spawn(n_folds), start=1):
        rng = np.random.default_rng(child)
        records, _ = _heterogeneous_query_records(
            rng, qids, results_per_query, k, intercept_spread, center_scale
        )
        train_q = set(qids[:n_train_queries])
        train_recs = [r for r in records if r.query_id in train_q]
        test_recs = [r for r in records if r.query_id not in train_q]
        train_ds = validate_dataset(train_recs, levels=2)

        maps = {}
        for kind in (ModelKind.BINARY, ModelKind.NO_INTERCEPT_BASELINE):
            result = fit(train_ds, kind, train)
            w = result.params.w_array
            scores = [float(np.dot(w, rec.features)) for rec in test_recs]
            per_query = evaluate_records(test_recs, scores, config)
            maps[kind] = mean_metrics([qm for _, qm in per_query]).average_precision
        outcomes.append(
            AblationFold(
                fold_id=fold_id,
                map_per_query_intercepts=maps[ModelKind.BINARY],
                map_shared_intercept=maps[ModelKind.NO_INTERCEPT_BASELINE],
            )
        )
    return outcomes
