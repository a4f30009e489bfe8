"""Shared fixtures: tiny synthetic datasets sized for fast unit tests."""

from pathlib import Path

import numpy as np
import pytest

from evotune.miga import PreparedSplit, SearchSpace


def make_tiny_split(seed=0, n_train=24, n_eval=8, d=4):
    """Small separable 2-class split; fitness evaluations take milliseconds."""
    rng = np.random.default_rng(seed)

    def sample(n):
        y = np.arange(n) % 2
        X = rng.normal(size=(n, d)) * 0.5
        X[:, 0] += np.where(y == 1, 2.0, -2.0)
        return X, y.astype(np.int64)

    X_train, y_train = sample(n_train)
    X_eval, y_eval = sample(n_eval)
    return PreparedSplit(
        X_train=X_train, y_train=y_train, X_eval=X_eval, y_eval=y_eval, class_count=2
    )


TINY_SPACE = SearchSpace(
    hidden_layer_options=((4,), (6,), (4, 4)),
    activation_options=("relu", "tanh"),
    learning_rate_options=(0.01, 0.05),
    solver_options=("adam", "sgd"),
)


@pytest.fixture
def tiny_split():
    return make_tiny_split()


@pytest.fixture
def tiny_space():
    return TINY_SPACE


# the 20-row mixed-type fixture shared with the frontend smoke test
TINY_CSV = (Path(__file__).parent / "data" / "tiny_mixed.csv").read_text()


@pytest.fixture(scope="session")
def tiny_csv_bytes():
    return TINY_CSV.encode()


@pytest.fixture
def tiny_csv_path(tmp_path):
    path = tmp_path / "tiny.csv"
    path.write_text(TINY_CSV)
    return path
