"""Timing benchmark: the same seeded search run sequentially and on a pool.

The speedup claim is only meaningful if both runs walked the identical
search path, so the benchmark refuses to report times unless the two
fitness histories match bit for bit.
"""

from __future__ import annotations

import csv
import io
import os
import time
from dataclasses import dataclass, replace
from pathlib import Path

from evotune.miga import (
    GaSettings,
    GenerationStats,
    PreparedSplit,
    SearchSpace,
    TuningResult,
    run_miga,
)


class BenchmarkError(RuntimeError):
    """Sequential and parallel runs disagreed; the comparison is invalid."""


@dataclass
class TimingRecord:
    dataset_name: str
    sequential_s: float
    parallel_s: float
    workers: int
    reduction_pct: float

    def to_dict(self) -> dict:
        return {
            "dataset_name": self.dataset_name,
            "sequential_s": self.sequential_s,
            "parallel_s": self.parallel_s,
            "workers": self.workers,
            "reduction_pct": self.reduction_pct,
        }


@dataclass
class BenchmarkResult:
    record: TimingRecord
    sequential: TuningResult
    parallel: TuningResult


def _histories_identical(a: list[GenerationStats], b: list[GenerationStats]) -> bool:
    if len(a) != len(b):
        return False
    for sa, sb in zip(a, b):
        if sa.fitnesses != sb.fitnesses or sa.best_so_far != sb.best_so_far:
            return False
        if sa.best_chromosome_so_far != sb.best_chromosome_so_far:
            return False
    return True


def run_benchmark(
    split: PreparedSplit,
    settings: GaSettings,
    dataset_name: str = "dataset",
    space: SearchSpace | None = None,
) -> BenchmarkResult:
    """Time run_miga with workers=1 and workers=N under one master seed.

    Raises BenchmarkError when the two fitness histories differ, because a
    speedup figure comparing different searches would be meaningless.
    """
    space = space or SearchSpace()
    par_workers = settings.effective_workers()

    started = time.perf_counter()
    sequential = run_miga(space, replace(settings, workers=1), split)
    sequential_s = time.perf_counter() - started

    started = time.perf_counter()
    parallel = run_miga(space, replace(settings, workers=par_workers), split)
    parallel_s = time.perf_counter() - started

    if not _histories_identical(sequential.history, parallel.history):
        raise BenchmarkError(
            "sequential and parallel runs produced different fitness histories; "
            "determinism contract violated"
        )

    record = TimingRecord(
        dataset_name=dataset_name,
        sequential_s=sequential_s,
        parallel_s=parallel_s,
        workers=par_workers,
        reduction_pct=100.0 * (sequential_s - parallel_s) / sequential_s,
    )
    return BenchmarkResult(record=record, sequential=sequential, parallel=parallel)


def render_generation_table(history: list[GenerationStats]) -> str:
    """Plain-text per-generation table: Generation | Min | Max | Best."""
    if not history:
        raise ValueError("history is empty")
    lines = ["Generation  Min  Max  Best"]
    for stats in history:
        lines.append(
            f"{stats.generation}  {stats.min:.4f}  {stats.max:.4f}  "
            f"{stats.best_in_generation:.4f}"
        )
    return "\n".join(lines)


def render_timing_table(record: TimingRecord) -> str:
    lines = [
        "Dataset  Sequential (s)  Parallel (s)  Workers  Reduction (%)",
        f"{record.dataset_name}  {record.sequential_s:.2f}  {record.parallel_s:.2f}  "
        f"{record.workers}  {record.reduction_pct:.1f}",
    ]
    return "\n".join(lines)


def timing_csv(record: TimingRecord) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["dataset", "sequential_s", "parallel_s", "workers", "reduction_pct"])
    writer.writerow(
        [
            record.dataset_name,
            f"{record.sequential_s:.4f}",
            f"{record.parallel_s:.4f}",
            record.workers,
            f"{record.reduction_pct:.2f}",
        ]
    )
    return buf.getvalue()


def write_reports(result: BenchmarkResult, reports_dir) -> list[Path]:
    """Write Markdown and CSV timing reports, recording detected core count."""
    reports_dir = Path(reports_dir)
    reports_dir.mkdir(parents=True, exist_ok=True)
    name = result.record.dataset_name.replace(" ", "_") or "dataset"
    cores = os.cpu_count() or 1

    csv_path = reports_dir / f"{name}_timing.csv"
    csv_path.write_text(timing_csv(result.record), encoding="utf-8")

    md_path = reports_dir / f"{name}_timing.md"
    r = result.record
    md = [
        f"# Tuning-time benchmark: {r.dataset_name}",
        "",
        f"Detected CPU cores: {cores}",
        "",
        "| Mode | Wall time (s) |",
        "| --- | --- |",
        f"| sequential (1 worker) | {r.sequential_s:.2f} |",
        f"| parallel ({r.workers} workers) | {r.parallel_s:.2f} |",
        "",
        f"Reduction: **{r.reduction_pct:.1f}%**",
        "",
        "## Per-generation fitness (identical in both modes)",
        "",
        "```",
        render_generation_table(result.sequential.history),
        "```",
        "",
    ]
    md_path.write_text("\n".join(md), encoding="utf-8")
    return [csv_path, md_path]
