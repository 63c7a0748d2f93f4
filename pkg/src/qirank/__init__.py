"""qirank: linear learning-to-rank with per-query intercept variables.

A single weight vector is shared across queries; each training query gets
its own free intercept ("benchmark") so that relevance judgments from
different queries stay comparable only through the weights.  Fitting is
plain maximum likelihood; at test time results are ranked by the linear
score alone.  The package also ships the LETOR 2.0 text-format tooling and
the NDCG/P@n/MAP evaluation harness needed to run 5-fold experiments.
"""

from .data import (
    Dataset,
    DatasetError,
    ModelParams,
    OrdinalScale,
    Record,
    validate_dataset,
)
from .estimator import QueryInterceptRanker
from .experiment import (
    AggregateReport,
    ExperimentConfig,
    ExperimentError,
    FoldOutcome,
    emit_report,
    generate_synthetic,
    run_experiment,
    run_fold,
    run_synthetic_ablation,
    write_synthetic_folds,
)
from .letor import (
    FoldSpec,
    LetorParseError,
    discover_folds,
    parse_file,
    parse_line,
    record_line,
    write_scores,
)
from .metrics import (
    MetricConfig,
    QueryMetrics,
    average_precision,
    evaluate_query,
    mean_metrics,
    ndcg_at_n,
    precision_at_n,
)
from .model import (
    ModelKind,
    log_sigmoid,
    prob_binary,
    prob_trinary,
    prob_trinary_alt,
    rank_query,
    rank_scores,
    score,
    sigmoid,
)
from .training import (
    FitResult,
    SavedModel,
    TrainConfig,
    TrainingError,
    fit,
    gradient,
    load_model,
    negative_log_likelihood,
    save_model,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateReport",
    "Dataset",
    "DatasetError",
    "ExperimentConfig",
    "ExperimentError",
    "FitResult",
    "FoldOutcome",
    "FoldSpec",
    "LetorParseError",
    "MetricConfig",
    "ModelKind",
    "ModelParams",
    "OrdinalScale",
    "QueryInterceptRanker",
    "QueryMetrics",
    "Record",
    "SavedModel",
    "TrainConfig",
    "TrainingError",
    "average_precision",
    "discover_folds",
    "emit_report",
    "evaluate_query",
    "fit",
    "generate_synthetic",
    "gradient",
    "load_model",
    "log_sigmoid",
    "mean_metrics",
    "ndcg_at_n",
    "negative_log_likelihood",
    "parse_file",
    "parse_line",
    "precision_at_n",
    "prob_binary",
    "prob_trinary",
    "prob_trinary_alt",
    "rank_query",
    "rank_scores",
    "record_line",
    "run_experiment",
    "run_fold",
    "run_synthetic_ablation",
    "save_model",
    "score",
    "sigmoid",
    "validate_dataset",
    "write_scores",
    "write_synthetic_folds",
]
