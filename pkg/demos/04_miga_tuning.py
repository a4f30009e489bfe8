"""Tune MLP hyperparameters with the genetic algorithm, fitness in parallel.

Uses the Parkinson-like fixture at reduced scale so the demo finishes in
about a minute; drop the settings overrides for the full configuration
(population 10, 10 generations, 500 epochs).
"""

from evotune.bench import render_generation_table
from evotune.miga import GaSettings, SearchSpace, run_miga
from evotune.pipeline import PipelineConfig, prepare
from evotune.summary import build_summary, render_summary

prepared = prepare(
    "tests/data/parkinsons_synthetic.csv",
    PipelineConfig(target_column="status", seed=0),
)
print(f"prepared: {prepared.split.X_train.shape[0]} train rows, "
      f"{prepared.split.X_train.shape[1]} kernel components")

space = SearchSpace()  # hidden {(50),(100),(150),(50,50),(100,100)} x 3 x 3 x 2
settings = GaSettings(
    population_size=6,
    generations=4,
    mutation_rate=0.1,
    workers=0,  # all cores
    master_seed=0,
    max_iter=150,
)

result = run_miga(
    space,
    settings,
    prepared.split,
    progress=lambda s: print(
        f"gen {s.generation}: min={s.min:.4f} max={s.max:.4f} "
        f"best_so_far={s.best_so_far:.4f}"
    ),
)

print()
print(render_generation_table(result.history))
print()
print(render_summary(build_summary(prepared, result)))
