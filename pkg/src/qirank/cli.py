"""Command-line interface.

Subcommands: train, score, eval, experiment, synth.  All configuration is
via flags; exit code 0 on success, 1 with a diagnostic line on any error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .experiment import (
    ExperimentConfig,
    emit_report,
    evaluate_records,
    normalize_records,
    run_experiment,
    write_synthetic_folds,
)
from .letor import parse_file, write_scores
from .metrics import MetricConfig, mean_metrics
from .model import ModelKind
from .training import TrainConfig, fit, load_model, save_model
from .data import validate_dataset

_KIND_CHOICES = [k.value for k in ModelKind]


def _add_train_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--model-kind", default="binary", choices=_KIND_CHOICES)
    p.add_argument("--l2", type=float, default=1e-6, help="ridge penalty on all parameters")
    p.add_argument("--tol", type=float, default=1e-8, help="gradient infinity-norm tolerance")
    p.add_argument("--max-iter", type=int, default=500)
    p.add_argument("--normalize", action="store_true", help="per-query min-max feature scaling")


def _add_metric_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--cutoffs", default="1,2,3,4,5,6,7,8,9,10",
                   help="comma-separated metric cutoffs")
    p.add_argument("--relevance-threshold", type=int, default=1,
                   help="labels >= threshold count as relevant for P@n and MAP")


def _train_config(args) -> TrainConfig:
    return TrainConfig(l2_penalty=args.l2, grad_tolerance=args.tol, max_iterations=args.max_iter)


def _metric_config(args) -> MetricConfig:
    cutoffs = tuple(int(c) for c in args.cutoffs.split(","))
    return MetricConfig(cutoffs=cutoffs, relevance_threshold=args.relevance_threshold)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qirank",
        description="Linear ranking with per-query intercepts: training, scoring and IR evaluation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a model on one LETOR file")
    p.add_argument("data", type=Path)
    p.add_argument("--out", type=Path, required=True, help="model JSON path")
    _add_train_flags(p)

    p = sub.add_parser("score", help="score a LETOR file with a saved model")
    p.add_argument("model", type=Path)
    p.add_argument("data", type=Path)
    p.add_argument("--out", type=Path, required=True, help="score file path (one per line)")
    p.add_argument("--normalize", action="store_true")

    p = sub.add_parser("eval", help="compute NDCG/P@n/MAP for a model or a score file")
    p.add_argument("data", type=Path)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--model", type=Path)
    g.add_argument("--scores", type=Path)
    p.add_argument("--normalize", action="store_true")
    _add_metric_flags(p)

    p = sub.add_parser("experiment", help="run the 5-fold protocol on a Fold1..Fold5 tree")
    p.add_argument("root", type=Path)
    p.add_argument("--out", type=Path, help="output directory (report + per-fold score files)")
    p.add_argument("--dataset", choices=["ohsumed", "td2003", "td2004"],
                   help="attach the published scoreboard rows for this collection")
    p.add_argument("--format", default="markdown", choices=["markdown", "csv"])
    _add_train_flags(p)
    _add_metric_flags(p)

    p = sub.add_parser("synth", help="emit a synthetic Fold1..Fold5 tree")
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--model-kind", default="binary", choices=_KIND_CHOICES)
    p.add_argument("--queries", type=int, default=40, help="training queries per fold")
    p.add_argument("--test-queries", type=int, default=20)
    p.add_argument("--results-per-query", type=int, default=20)
    p.add_argument("--features", type=int, default=10)
    return parser


def _cmd_train(args) -> int:
    records = parse_file(args.data)
    if args.normalize:
        records = normalize_records(records)
    kind = ModelKind.from_string(args.model_kind)
    dataset = validate_dataset(records, levels=kind.levels)
    config = _train_config(args)
    result = fit(dataset, kind, config)
    save_model(args.out, result.params, kind, config)
    status = "converged" if result.converged else "NOT converged"
    print(f"fit {status}: nll={result.final_nll:.6f} iterations={result.iterations}")
    print(f"model written to {args.out}")
    return 0


def _scores_for(model_path: Path, records) -> list[float]:
    saved = load_model(model_path)
    w = np.asarray(saved.params.w, dtype=np.float64)
    out = []
    for rec in records:
        phi = np.asarray(rec.features, dtype=np.float64)
        if phi.shape != w.shape:
            raise ValueError(
                f"record has {phi.shape[0]} features, model expects {w.shape[0]}"
            )
        out.append(float(w @ phi))
    return out


def _cmd_score(args) -> int:
    records = parse_file(args.data)
    if args.normalize:
        records = normalize_records(records)
    scores = _scores_for(args.model, records)
    write_scores(records, scores, args.out)
    print(f"wrote {len(scores)} scores to {args.out}")
    return 0


def _read_score_file(path: Path) -> list[float]:
    values = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                values.append(float(line))
    return values


def _cmd_eval(args) -> int:
    records = parse_file(args.data)
    if args.normalize:
        records = normalize_records(records)
    if args.model is not None:
        scores = _scores_for(args.model, records)
    else:
        scores = _read_score_file(args.scores)
        if len(scores) != len(records):
            raise ValueError(
                f"score file has {len(scores)} entries for {len(records)} records"
            )
    config = _metric_config(args)
    per_query = evaluate_records(records, scores, config)
    avg = mean_metrics([qm for _, qm in per_query])
    print(f"queries {len(per_query)}")
    for n in config.cutoffs:
        print(f"ndcg@{n} {avg.ndcg_at[n]:.6f}")
    for n in config.cutoffs:
        print(f"p@{n} {avg.precision_at[n]:.6f}")
    print(f"map {avg.average_precision:.6f}")
    return 0


def _cmd_experiment(args) -> int:
    config = ExperimentConfig(
        dataset_root=args.root,
        model_kind=ModelKind.from_string(args.model_kind),
        train=_train_config(args),
        metrics=_metric_config(args),
        normalize_features=args.normalize,
        dataset_name=args.dataset,
        output_dir=args.out,
    )
    report = run_experiment(config)
    text = emit_report(report, args.format)
    if args.out is not None:
        args.out.mkdir(parents=True, exist_ok=True)
        ext = "md" if args.format == "markdown" else "csv"
        path = args.out / f"report.{ext}"
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(f"report written to {path}")
    else:
        print(text, end="")
    return 0


def _cmd_synth(args) -> int:
    write_synthetic_folds(
        args.out,
        n_train_queries=args.queries,
        n_test_queries=args.test_queries,
        results_per_query=args.results_per_query,
        k=args.features,
        kind=ModelKind.from_string(args.model_kind),
        seed=args.seed,
    )
    print(f"synthetic fold tree written to {args.out}")
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "score": _cmd_score,
    "eval": _cmd_eval,
    "experiment": _cmd_experiment,
    "synth": _cmd_synth,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
