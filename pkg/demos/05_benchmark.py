"""Sequential-vs-parallel tuning time with the determinism gate.

The benchmark runs the identical seeded search twice, refuses to report
times if the two fitness histories differ, and writes Markdown + CSV
reports. On a single-core machine the reduction hovers near zero; with
four or more cores it lands around the 40-60% range.
"""

import os

from evotune.bench import render_generation_table, render_timing_table, run_benchmark, write_reports
from evotune.miga import GaSettings
from evotune.pipeline import PipelineConfig, prepare

prepared = prepare(
    "tests/data/parkinsons_synthetic.csv",
    PipelineConfig(target_column="status", seed=1),
)

settings = GaSettings(
    population_size=6,
    generations=3,
    master_seed=1,
    workers=0,  # parallel leg uses all cores
    max_iter=150,
)

print(f"cores detected: {os.cpu_count()}")
result = run_benchmark(prepared.split, settings, dataset_name="parkinsons_demo")

print(render_timing_table(result.record))
print()
print(render_generation_table(result.sequential.history))

paths = write_reports(result, "reports")
print("\nreports written:", ", ".join(str(p) for p in paths))
