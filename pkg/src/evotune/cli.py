"""Command-line front end: tune, predict, and benchmark.

Exit codes: 0 on success, 2 for validation problems (bad files, bad
columns, bad settings), 1 for unexpected internal errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

from evotune.bench import (
    BenchmarkError,
    render_generation_table,
    render_timing_table,
    run_benchmark,
    timing_csv,
    write_reports,
)
from evotune.dataset import DataError, load_csv
from evotune.miga import GaSettings, SearchSpace, run_miga
from evotune.model_io import (
    ModelFormatError,
    RowSchemaError,
    bundle_from_run,
    load_model,
    predict_rows,
    save_model,
)
from evotune.pipeline import PipelineConfig, prepare
from evotune.summary import build_summary, render_summary

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2


def _default_workers() -> int:
    env = os.environ.get("EVOTUNE_WORKERS")
    if env:
        try:
            return int(env)
        except ValueError:
            raise DataError(f"EVOTUNE_WORKERS must be an integer, got {env!r}")
    return 0


def _parse_space(text: str | None) -> SearchSpace:
    if not text:
        return SearchSpace()
    raw = text.strip()
    if not raw.startswith("{"):
        path = Path(raw)
        if not path.exists():
            raise DataError(f"search-space file not found: {raw}")
        raw = path.read_text(encoding="utf-8")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DataError(f"invalid search-space JSON: {exc}") from None
    try:
        return SearchSpace.from_dict(doc)
    except (TypeError, ValueError) as exc:
        raise DataError(f"invalid search space: {exc}") from None


def _add_pipeline_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--data", required=True, help="input CSV with a header row")
    p.add_argument("--target", required=True, help="target column name")
    p.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    p.add_argument("--knn-k", type=int, default=5, help="neighbours for KNN imputation")
    p.add_argument("--no-kpca", action="store_true", help="skip kernel PCA")
    p.add_argument("--no-standardize", action="store_true", help="skip z-scoring")
    p.add_argument("--no-stratify", action="store_true", help="plain random split")
    p.add_argument("--variance-target", type=float, default=0.95)
    p.add_argument("--gamma", type=float, default=None, help="RBF width (default 1/d)")
    p.add_argument(
        "--holdout-fitness",
        action="store_true",
        help="score fitness on a holdout carved from training data instead of the test set",
    )


def _add_ga_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--workers", type=int, default=None, help="pool size (0 = all cores)")
    p.add_argument("--generations", type=int, default=10)
    p.add_argument("--population", type=int, default=10)
    p.add_argument("--mutation-rate", type=float, default=0.1)
    p.add_argument("--space", default=None, help="search-space JSON (inline or a file path)")
    p.add_argument(
        "--memoize",
        action="store_true",
        help="reuse a chromosome's first fitness instead of re-evaluating",
    )


def _pipeline_config(args) -> PipelineConfig:
    return PipelineConfig(
        target_column=args.target,
        knn_k=args.knn_k,
        use_kpca=not args.no_kpca,
        use_standardize=not args.no_standardize,
        stratify=not args.no_stratify,
        variance_target=args.variance_target,
        gamma=args.gamma,
        holdout_fitness=args.holdout_fitness,
        seed=args.seed,
    )


def _ga_settings(args) -> GaSettings:
    workers = args.workers if args.workers is not None else _default_workers()
    return GaSettings(
        population_size=args.population,
        generations=args.generations,
        mutation_rate=args.mutation_rate,
        workers=workers,
        master_seed=args.seed,
        memoize=args.memoize,
    )


def cmd_tune(args) -> int:
    space = _parse_space(args.space)
    settings = _ga_settings(args)
    prepared = prepare(args.data, _pipeline_config(args))

    def on_generation(stats):
        print(
            f"gen {stats.generation}: min={stats.min:.4f} max={stats.max:.4f} "
            f"best={stats.best_in_generation:.4f} best_so_far={stats.best_so_far:.4f}",
            flush=True,
        )

    result = run_miga(space, settings, prepared.split, progress=on_generation)
    summary = build_summary(prepared, result)
    print()
    print(render_summary(summary))

    if args.out:
        if result.final_model is None:
            print("no model saved: final training diverged", file=sys.stderr)
            return EXIT_INTERNAL
        bundle = bundle_from_run(
            prepared,
            result.final_model,
            train_config={
                "hidden_layers": list(result.best.hidden_layers),
                "activation": result.best.activation,
                "learning_rate_init": result.best.learning_rate,
                "solver": result.best.solver,
                "max_iter": settings.max_iter,
                "seed": result.best_seed,
            },
        )
        save_model(bundle, args.out)
        print(f"model written to {args.out}")
    return EXIT_OK


def cmd_predict(args) -> int:
    bundle = load_model(args.model)
    ds = load_csv(args.data)
    required = [c.name for c in bundle.columns]
    missing = [name for name in required if name not in ds.column_names]
    if missing:
        raise RowSchemaError(f"missing columns: {missing}", missing=missing)

    rows = [dict(zip(ds.column_names, row)) for row in ds.cells]
    labels, probs = predict_rows(bundle, rows, strict_columns=False)

    header = ["prediction"]
    if args.proba:
        header += [f"proba_{name}" for name in bundle.class_names]
    out_fh = open(args.out, "w", encoding="utf-8", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out_fh)
        writer.writerow(header)
        for i, label in enumerate(labels):
            row = [label]
            if args.proba:
                row += [f"{p:.17g}" for p in probs[i]]
            writer.writerow(row)
    finally:
        if args.out:
            out_fh.close()
    return EXIT_OK


def cmd_benchmark(args) -> int:
    settings = _ga_settings(args)
    prepared = prepare(args.data, _pipeline_config(args))
    dataset_name = Path(args.data).stem
    result = run_benchmark(
        prepared.split, settings, dataset_name=dataset_name, space=_parse_space(args.space)
    )
    if args.json:
        print(json.dumps(result.record.to_dict()))
    elif args.format == "csv":
        print(timing_csv(result.record), end="")
    else:
        print(render_timing_table(result.record))
        print()
        print(render_generation_table(result.sequential.history))
    if args.reports_dir:
        paths = write_reports(result, args.reports_dir)
        print(f"reports written: {', '.join(str(p) for p in paths)}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="evotune",
        description="GA-tuned MLP classification with parallel fitness evaluation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tune = sub.add_parser("tune", help="run the full tuning pipeline")
    _add_pipeline_flags(p_tune)
    _add_ga_flags(p_tune)
    p_tune.add_argument("--out", default=None, help="write the trained model here")
    p_tune.set_defaults(func=cmd_tune)

    p_pred = sub.add_parser("predict", help="score a CSV with a saved model")
    p_pred.add_argument("--model", required=True)
    p_pred.add_argument("--data", required=True)
    p_pred.add_argument("--proba", action="store_true", help="include class probabilities")
    p_pred.add_argument("--out", default=None, help="write CSV here instead of stdout")
    p_pred.set_defaults(func=cmd_predict)

    p_bench = sub.add_parser("benchmark", help="sequential vs parallel tuning time")
    _add_pipeline_flags(p_bench)
    _add_ga_flags(p_bench)
    p_bench.add_argument("--format", choices=("table", "csv"), default="table")
    p_bench.add_argument("--json", action="store_true", help="print a JSON record")
    p_bench.add_argument(
        "--reports-dir",
        default="reports",
        help="directory for Markdown/CSV reports ('' to skip)",
    )
    p_bench.set_defaults(func=cmd_benchmark)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DataError, RowSchemaError, ModelFormatError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return EXIT_USAGE
    except BenchmarkError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
