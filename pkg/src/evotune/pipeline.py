"""End-to-end data preparation: impute -> encode -> split -> scale -> KPCA.

The output bundles the matrices the tuner consumes together with the
per-column statistics needed to serialize a model that can score raw rows
later (the saved-model file embeds all of it).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from evotune.dataset import (
    CATEGORICAL,
    NUMERIC,
    TabularDataset,
    impute_dataset,
    load_csv,
    one_hot_encode,
    standardize,
    train_test_split,
)
from evotune.kpca import KpcaModel, fit_kpca, transform
from evotune.miga import PreparedSplit, derive_seed

_STREAM_HOLDOUT = 17


@dataclass(frozen=True)
class PipelineConfig:
    target_column: str
    knn_k: int = 5
    use_kpca: bool = True
    use_standardize: bool = True
    stratify: bool = True
    variance_target: float = 0.95
    gamma: float | None = None  # None: 1 / encoded feature count
    split_ratio: float = 0.8
    holdout_fitness: bool = False
    seed: int = 0


@dataclass
class ColumnSpec:
    """Everything needed to encode one original feature column at predict time."""

    name: str
    kind: str
    mean: float | None = None  # numeric: train mean, used to impute
    mode: str | None = None  # categorical: train mode, used to impute
    categories: list[str] = field(default_factory=list)


@dataclass
class PreparedData:
    split: PreparedSplit
    X_test: np.ndarray
    y_test: np.ndarray
    class_names: list[str]
    feature_names: list[str]
    columns: list[ColumnSpec]
    means: np.ndarray | None
    stds: np.ndarray | None
    kpca_model: KpcaModel | None
    gamma_used: float | None
    config: PipelineConfig
    n_encoded_features: int


def _column_specs(
    imputed: TabularDataset, target_column: str, train_indices: np.ndarray
) -> list[ColumnSpec]:
    t = imputed.column_index(target_column)
    train_rows = [imputed.cells[i] for i in train_indices]
    specs = []
    for j in range(imputed.n_cols):
        if j == t:
            continue
        name = imputed.column_names[j]
        if imputed.column_kinds[j] == NUMERIC:
            values = [row[j] for row in train_rows if row[j] is not None]
            mean = float(np.mean(values)) if values else 0.0
            specs.append(ColumnSpec(name=name, kind=NUMERIC, mean=mean))
        else:
            values = [str(row[j]) for row in train_rows if row[j] is not None]
            counts: dict[str, int] = {}
            for v in values:
                counts[v] = counts.get(v, 0) + 1
            top = max(counts.values(), default=0)
            mode = min((v for v, c in counts.items() if c == top), default="")
            categories = sorted({str(row[j]) for row in imputed.cells if row[j] is not None})
            specs.append(
                ColumnSpec(name=name, kind=CATEGORICAL, mode=mode, categories=categories)
            )
    return specs


def prepare(source, config: PipelineConfig) -> PreparedData:
    """Run the preprocessing pipeline and package matrices for the tuner.

    ``source`` is a TabularDataset or anything load_csv accepts. KPCA is fit
    on training rows only; with ``holdout_fitness`` a further stratified
    split carves the fitness set out of the training data so the test split
    stays untouched until final reporting.
    """
    ds = source if isinstance(source, TabularDataset) else load_csv(source)
    imputed = impute_dataset(ds, config.target_column, k=config.knn_k)
    encoded = one_hot_encode(imputed, config.target_column)
    pair = train_test_split(
        encoded, ratio=config.split_ratio, seed=config.seed, stratify=config.stratify
    )

    if config.use_standardize:
        train_m, test_m, means, stds = standardize(pair.train, pair.test)
    else:
        train_m, test_m = pair.train, pair.test
        means, stds = pair.train.features.mean(axis=0), None

    columns = _column_specs(imputed, config.target_column, pair.train_indices)

    if config.holdout_fitness:
        inner = train_test_split(
            train_m,
            ratio=config.split_ratio,
            seed=derive_seed(config.seed, _STREAM_HOLDOUT),
            stratify=config.stratify,
        )
        fit_m, eval_m = inner.train, inner.test
    else:
        fit_m, eval_m = train_m, test_m

    kpca_model = None
    gamma_used = None
    if config.use_kpca:
        gamma_used = config.gamma or 1.0 / fit_m.features.shape[1]
        kpca_model = fit_kpca(fit_m.features, gamma_used, config.variance_target)
        X_fit = transform(kpca_model, fit_m.features)
        X_eval = transform(kpca_model, eval_m.features)
        X_test = transform(kpca_model, test_m.features)
    else:
        X_fit, X_eval, X_test = fit_m.features, eval_m.features, test_m.features

    split = PreparedSplit(
        X_train=X_fit,
        y_train=fit_m.labels,
        X_eval=X_eval,
        y_eval=eval_m.labels,
        class_count=len(encoded.class_names),
    )
    return PreparedData(
        split=split,
        X_test=X_test,
        y_test=test_m.labels,
        class_names=list(encoded.class_names),
        feature_names=list(encoded.feature_names),
        columns=columns,
        means=means,
        stds=stds,
        kpca_model=kpca_model,
        gamma_used=gamma_used,
        config=config,
        n_encoded_features=encoded.features.shape[1],
    )
