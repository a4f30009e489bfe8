"""evotune: GA-driven hyperparameter tuning for a from-scratch MLP classifier.

Pipeline: KNN imputation -> one-hot encoding -> standardization -> RBF
kernel PCA -> MLP training, with the hyperparameters searched by an elitist
genetic algorithm whose fitness evaluations run on a worker pool.
"""

from evotune.dataset import (
    DataError,
    EncodedMatrix,
    SplitPair,
    TabularDataset,
    knn_impute,
    load_csv,
    one_hot_encode,
    standardize,
    train_test_split,
)
from evotune.kpca import KpcaModel, fit_kpca, rbf_kernel, symmetric_eig, transform
from evotune.metrics import ConfusionMatrix, accuracy, classification_report, confusion
from evotune.miga import (
    Chromosome,
    GaSettings,
    GenerationStats,
    SearchSpace,
    TuningResult,
    run_miga,
)
from evotune.mlp import MlpConfig, MlpModel, TrainingDiverged, predict, train

__all__ = [
    "Chromosome",
    "ConfusionMatrix",
    "DataError",
    "EncodedMatrix",
    "GaSettings",
    "GenerationStats",
    "KpcaModel",
    "MlpConfig",
    "MlpModel",
    "SearchSpace",
    "SplitPair",
    "TabularDataset",
    "TrainingDiverged",
    "TuningResult",
    "accuracy",
    "classification_report",
    "confusion",
    "fit_kpca",
    "knn_impute",
    "load_csv",
    "one_hot_encode",
    "predict",
    "rbf_kernel",
    "run_miga",
    "standardize",
    "symmetric_eig",
    "train",
    "train_test_split",
    "transform",
]

__version__ = "0.1.0"
