"""Elitist genetic algorithm over MLP hyperparameters with pooled fitness.

Each chromosome is the 4-tuple [hidden layer sizes, activation, learning
rate, solver]. Every generation is evaluated on a worker pool, the top
half (by default) becomes the parent set, and the next generation is
filled entirely with mutated crossover children while the best
configuration seen so far is tracked separately.

Determinism contract: every random draw is derived from the master seed
with a fixed 64-bit mixing function, keyed by purpose, generation and
individual index, so results are bit-identical for any worker count.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from threadpoolctl import threadpool_limits

from evotune.metrics import accuracy
from evotune.mlp import MlpConfig, MlpModel, TrainingDiverged, predict, train

logger = logging.getLogger(__name__)

_MASK64 = (1 << 64) - 1

# stream tags for seed derivation
_STREAM_INIT = 1
_STREAM_BREED = 2
_STREAM_FITNESS = 3


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


def derive_seed(master_seed: int, *parts: int) -> int:
    """Mix the master seed with integer tags into a 64-bit stream seed."""
    h = master_seed & _MASK64
    for p in parts:
        h = _splitmix64(h ^ (p & _MASK64))
    return h


@dataclass(frozen=True)
class SearchSpace:
    hidden_layer_options: tuple[tuple[int, ...], ...] = (
        (50,),
        (100,),
        (150,),
        (50, 50),
        (100, 100),
    )
    activation_options: tuple[str, ...] = ("relu", "tanh", "logistic")
    learning_rate_options: tuple[float, ...] = (0.001, 0.01, 0.1)
    solver_options: tuple[str, ...] = ("adam", "sgd")

    def __post_init__(self):
        for name in (
            "hidden_layer_options",
            "activation_options",
            "learning_rate_options",
            "solver_options",
        ):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")

    def size(self) -> int:
        return (
            len(self.hidden_layer_options)
            * len(self.activation_options)
            * len(self.learning_rate_options)
            * len(self.solver_options)
        )

    def contains(self, c: "Chromosome") -> bool:
        return (
            c.hidden_layers in self.hidden_layer_options
            and c.activation in self.activation_options
            and c.learning_rate in self.learning_rate_options
            and c.solver in self.solver_options
        )

    def to_dict(self) -> dict:
        return {
            "hidden_layer_options": [list(h) for h in self.hidden_layer_options],
            "activation_options": list(self.activation_options),
            "learning_rate_options": list(self.learning_rate_options),
            "solver_options": list(self.solver_options),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SearchSpace":
        known = {
            "hidden_layer_options",
            "activation_options",
            "learning_rate_options",
            "solver_options",
        }
        unknown = set(d) - known
        if unknown:
            raise ValueError(f"unknown search-space keys: {sorted(unknown)}")
        kwargs = {}
        if "hidden_layer_options" in d:
            kwargs["hidden_layer_options"] = tuple(
                tuple(int(x) for x in h) for h in d["hidden_layer_options"]
            )
        if "activation_options" in d:
            kwargs["activation_options"] = tuple(str(a) for a in d["activation_options"])
        if "learning_rate_options" in d:
            kwargs["learning_rate_options"] = tuple(
                float(r) for r in d["learning_rate_options"]
            )
        if "solver_options" in d:
            kwargs["solver_options"] = tuple(str(s) for s in d["solver_options"])
        return cls(**kwargs)


@dataclass(frozen=True)
class Chromosome:
    """One hyperparameter configuration drawn from a SearchSpace."""

    hidden_layers: tuple[int, ...]
    activation: str
    learning_rate: float
    solver: str

    def genes(self) -> tuple:
        return (self.hidden_layers, self.activation, self.learning_rate, self.solver)

    def to_config(self, seed: int, max_iter: int = 500) -> MlpConfig:
        return MlpConfig(
            hidden_layers=self.hidden_layers,
            activation=self.activation,
            learning_rate_init=self.learning_rate,
            solver=self.solver,
            max_iter=max_iter,
            seed=seed,
        )

    def describe(self) -> str:
        hidden = ", ".join(str(h) for h in self.hidden_layers)
        return f"[({hidden}), {self.activation}, {self.learning_rate}, {self.solver}]"


@dataclass(frozen=True)
class GaSettings:
    population_size: int = 10
    generations: int = 10
    mutation_rate: float = 0.1
    elite_fraction: float = 0.5
    workers: int = 0  # 0: use available parallelism
    master_seed: int = 0
    max_iter: int = 500
    # reuse a chromosome's first fitness in later generations instead of
    # retraining under a fresh derived seed; faster, but hides the natural
    # re-evaluation fluctuation, so it is off by default
    memoize: bool = False

    def __post_init__(self):
        if self.population_size < 2:
            raise ValueError("population_size must be >= 2")
        if self.generations < 1:
            raise ValueError("generations must be >= 1")
        if not 0.0 <= self.mutation_rate <= 1.0:
            raise ValueError("mutation_rate must be in [0, 1]")
        if not 0.0 < self.elite_fraction <= 1.0:
            raise ValueError("elite_fraction must be in (0, 1]")
        if self.workers < 0:
            raise ValueError("workers must be >= 0")

    def effective_workers(self) -> int:
        return self.workers if self.workers > 0 else (os.cpu_count() or 1)


@dataclass
class GenerationStats:
    generation: int
    fitnesses: list[float]
    min: float
    max: float
    best_in_generation: float
    best_so_far: float
    best_chromosome_so_far: Chromosome
    wall_time_s: float

    def to_dict(self) -> dict:
        return {
            "generation": self.generation,
            "fitnesses": list(self.fitnesses),
            "min": self.min,
            "max": self.max,
            "best_in_generation": self.best_in_generation,
            "best_so_far": self.best_so_far,
            "best_chromosome_so_far": {
                "hidden_layers": list(self.best_chromosome_so_far.hidden_layers),
                "activation": self.best_chromosome_so_far.activation,
                "learning_rate": self.best_chromosome_so_far.learning_rate,
                "solver": self.best_chromosome_so_far.solver,
            },
            "wall_time_s": self.wall_time_s,
        }


@dataclass
class PreparedSplit:
    """Feature matrices the tuner trains and scores on.

    ``X_eval``/``y_eval`` is the fitness set: the test split by default
    (the protocol this tool reproduces scores fitness on the test set), or
    a holdout carved from training data when leak-free tuning is requested.
    """

    X_train: np.ndarray
    y_train: np.ndarray
    X_eval: np.ndarray
    y_eval: np.ndarray
    class_count: int


@dataclass
class TuningResult:
    best: Chromosome
    best_fitness: float
    history: list[GenerationStats]
    total_time_s: float
    mode: str  # "sequential" | "parallel"
    final_model: MlpModel | None
    best_seed: int = 0
    final_train_time_s: float = 0.0


def init_population(space: SearchSpace, n: int, rng: np.random.Generator) -> list[Chromosome]:
    """n chromosomes with each gene drawn uniformly from its option list."""
    if n < 2:
        raise ValueError("population size must be >= 2")
    pop = []
    for _ in range(n):
        pop.append(
            Chromosome(
                hidden_layers=space.hidden_layer_options[
                    rng.integers(len(space.hidden_layer_options))
                ],
                activation=space.activation_options[
                    rng.integers(len(space.activation_options))
                ],
                learning_rate=space.learning_rate_options[
                    rng.integers(len(space.learning_rate_options))
                ],
                solver=space.solver_options[rng.integers(len(space.solver_options))],
            )
        )
    return pop


def fitness(
    chrom: Chromosome,
    split: PreparedSplit,
    seed: int = 0,
    max_iter: int = 500,
) -> float:
    """Train an MLP from the chromosome's config and return eval accuracy.

    A diverged training counts as fitness 0.0 by contract.
    """
    config = chrom.to_config(seed=seed, max_iter=max_iter)
    try:
        model = train(config, split.X_train, split.y_train, split.class_count)
    except TrainingDiverged:
        return 0.0
    return accuracy(split.y_eval, predict(model, split.X_eval))


def evaluate_population(
    pop: list[Chromosome],
    split: PreparedSplit,
    settings: GaSettings,
    generation: int = 1,
    cache: dict[Chromosome, float] | None = None,
) -> list[float]:
    """Fitness of every chromosome, in population order.

    Evaluations are independent tasks on a pool of ``settings.workers``
    threads (1 means sequential). Per-individual seeds depend only on
    (master_seed, generation, index), so the result vector is identical
    for any worker count. A task that raises is logged and scored 0.0.

    BLAS pools are pinned to a single thread for the whole evaluation:
    parallelism comes from the task pool, and tasks never contend with
    library-internal threading (which would also make sequential and
    pooled runs harder to compare).
    """
    if not pop:
        raise ValueError("population must be non-empty")
    seeds = [
        derive_seed(settings.master_seed, _STREAM_FITNESS, generation, i)
        for i in range(len(pop))
    ]
    workers = settings.effective_workers()
    pending = [
        i for i in range(len(pop)) if cache is None or pop[i] not in cache
    ]

    def task(i: int) -> float:
        return fitness(pop[i], split, seed=seeds[i], max_iter=settings.max_iter)

    results = [0.0] * len(pop)
    fresh: dict[int, float] = {}
    with threadpool_limits(limits=1):
        if workers == 1:
            for i in pending:
                try:
                    fresh[i] = task(i)
                except Exception:
                    fresh[i] = 0.0
                    logger.exception("fitness evaluation failed for individual %d", i)
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                futures = {pool.submit(task, i): i for i in pending}
                for future, i in futures.items():
                    try:
                        fresh[i] = future.result()
                    except Exception:
                        fresh[i] = 0.0
                        logger.exception(
                            "fitness evaluation failed for individual %d", i
                        )
    for i in range(len(pop)):
        if i in fresh:
            results[i] = fresh[i]
            if cache is not None:
                # first fresh value wins for duplicates within one generation
                cache.setdefault(pop[i], fresh[i])
        else:
            results[i] = cache[pop[i]]  # type: ignore[index]
    return results


def select_elite(
    pop: list[Chromosome], fitnesses: list[float], elite_fraction: float
) -> list[Chromosome]:
    """Top ceil(elite_fraction * |pop|) chromosomes by fitness, ties by index."""
    if len(pop) != len(fitnesses):
        raise ValueError("population and fitness lists must have equal length")
    if not 0.0 < elite_fraction <= 1.0:
        raise ValueError("elite_fraction must be in (0, 1]")
    count = int(np.ceil(elite_fraction * len(pop)))
    order = sorted(range(len(pop)), key=lambda i: (-fitnesses[i], i))
    return [pop[i] for i in order[:count]]


def uniform_crossover(
    p1: Chromosome, p2: Chromosome, rng: np.random.Generator
) -> Chromosome:
    """Child takes each of the 4 genes from either parent with probability 1/2."""
    picks = rng.integers(0, 2, size=4)
    g1, g2 = p1.genes(), p2.genes()
    genes = tuple(g1[k] if picks[k] == 0 else g2[k] for k in range(4))
    return Chromosome(*genes)


def mutate(
    c: Chromosome, space: SearchSpace, mu: float, rng: np.random.Generator
) -> Chromosome:
    """With probability mu, resample exactly one uniformly chosen gene."""
    if not 0.0 <= mu <= 1.0:
        raise ValueError("mutation rate must be in [0, 1]")
    if rng.random() >= mu:
        return c
    position = int(rng.integers(4))
    options = (
        space.hidden_layer_options,
        space.activation_options,
        space.learning_rate_options,
        space.solver_options,
    )[position]
    value = options[rng.integers(len(options))]
    genes = list(c.genes())
    genes[position] = value
    return Chromosome(*genes)


def run_miga(
    space: SearchSpace,
    settings: GaSettings,
    split: PreparedSplit,
    progress=None,
) -> TuningResult:
    """Evolve hyperparameters for ``settings.generations`` generations.

    Per generation: pooled fitness evaluation, elitist parent selection,
    a fresh population of uniform-crossover children, single-gene mutation,
    and best-so-far tracking. ``progress`` (if given) receives one
    GenerationStats per generation; its failures are logged, not raised.
    Finally the best chromosome is retrained with the same derived seed
    that produced its winning evaluation.
    """
    started = time.perf_counter()
    rng_init = np.random.default_rng(derive_seed(settings.master_seed, _STREAM_INIT))
    pop = init_population(space, settings.population_size, rng_init)

    best_chrom: Chromosome | None = None
    best_fit = -np.inf
    best_seed = 0
    history: list[GenerationStats] = []
    cache: dict[Chromosome, float] | None = {} if settings.memoize else None

    for gen in range(1, settings.generations + 1):
        gen_started = time.perf_counter()
        fits = evaluate_population(pop, split, settings, generation=gen, cache=cache)
        for i, f in enumerate(fits):
            if f > best_fit:
                best_fit = f
                best_chrom = pop[i]
                best_seed = derive_seed(
                    settings.master_seed, _STREAM_FITNESS, gen, i
                )
        stats = GenerationStats(
            generation=gen,
            fitnesses=list(fits),
            min=min(fits),
            max=max(fits),
            best_in_generation=max(fits),
            best_so_far=best_fit,
            best_chromosome_so_far=best_chrom,
            wall_time_s=time.perf_counter() - gen_started,
        )
        history.append(stats)
        if progress is not None:
            try:
                progress(stats)
            except Exception:
                logger.exception("progress callback failed at generation %d", gen)

        if gen < settings.generations:
            rng_breed = np.random.default_rng(
                derive_seed(settings.master_seed, _STREAM_BREED, gen)
            )
            elites = select_elite(pop, fits, settings.elite_fraction)
            children = []
            while len(children) < settings.population_size:
                p1 = elites[rng_breed.integers(len(elites))]
                p2 = elites[rng_breed.integers(len(elites))]
                children.append(uniform_crossover(p1, p2, rng_breed))
            pop = [
                mutate(child, space, settings.mutation_rate, rng_breed)
                for child in children
            ]

    final_model: MlpModel | None = None
    retrain_started = time.perf_counter()
    try:
        with threadpool_limits(limits=1):
            final_model = train(
                best_chrom.to_config(seed=best_seed, max_iter=settings.max_iter),
                split.X_train,
                split.y_train,
                split.class_count,
            )
    except TrainingDiverged:
        logger.warning("final retraining of best chromosome diverged; no model kept")

    return TuningResult(
        best=best_chrom,
        best_fitness=best_fit,
        history=history,
        total_time_s=time.perf_counter() - started,
        mode="sequential" if settings.effective_workers() == 1 else "parallel",
        final_model=final_model,
        best_seed=best_seed,
        final_train_time_s=time.perf_counter() - retrain_started,
    )
