"""Pipeline preparation tests: stage order, toggles, and stored statistics."""

import numpy as np
import pytest

from evotune.dataset import DataError
from evotune.pipeline import PipelineConfig, prepare


class TestPrepare:
    def test_shapes_and_classes(self, tiny_csv_bytes):
        prep = prepare(tiny_csv_bytes, PipelineConfig(target_column="outcome", seed=1))
        assert prep.class_names == ["healthy", "sick"]
        assert prep.split.X_train.shape[0] == 16  # floor(0.8 * 20)
        assert prep.split.X_eval.shape[0] == 4
        assert prep.split.class_count == 2
        # fitness set is the test split by default
        assert np.array_equal(prep.split.X_eval, prep.X_test)

    def test_kpca_reduces_dimensions(self, tiny_csv_bytes):
        with_kpca = prepare(tiny_csv_bytes, PipelineConfig(target_column="outcome", seed=1))
        without = prepare(
            tiny_csv_bytes,
            PipelineConfig(target_column="outcome", seed=1, use_kpca=False),
        )
        assert with_kpca.kpca_model is not None
        assert with_kpca.split.X_train.shape[1] == with_kpca.kpca_model.n_components
        assert without.kpca_model is None
        assert without.split.X_train.shape[1] == without.n_encoded_features

    def test_gamma_defaults_to_inverse_dimension(self, tiny_csv_bytes):
        prep = prepare(tiny_csv_bytes, PipelineConfig(target_column="outcome", seed=1))
        assert prep.gamma_used == pytest.approx(1.0 / prep.n_encoded_features)
        explicit = prepare(
            tiny_csv_bytes, PipelineConfig(target_column="outcome", seed=1, gamma=0.3)
        )
        assert explicit.gamma_used == 0.3

    def test_standardize_statistics_recorded(self, tiny_csv_bytes):
        prep = prepare(tiny_csv_bytes, PipelineConfig(target_column="outcome", seed=2))
        assert prep.means is not None and prep.stds is not None
        assert prep.means.shape == (prep.n_encoded_features,)

    def test_no_standardize_keeps_raw_features(self, tiny_csv_bytes):
        prep = prepare(
            tiny_csv_bytes,
            PipelineConfig(
                target_column="outcome", seed=2, use_standardize=False, use_kpca=False
            ),
        )
        assert prep.stds is None
        assert prep.split.X_train[:, 0].max() > 10  # raw ages survive

    def test_column_specs_cover_features(self, tiny_csv_bytes):
        prep = prepare(tiny_csv_bytes, PipelineConfig(target_column="outcome", seed=1))
        names = [c.name for c in prep.columns]
        assert names == ["age", "bp", "pc", "grade"]
        kinds = {c.name: c.kind for c in prep.columns}
        assert kinds["age"] == "numeric" and kinds["pc"] == "categorical"
        pc = next(c for c in prep.columns if c.name == "pc")
        assert pc.categories == ["abnormal", "normal"]
        assert pc.mode in pc.categories
        age = next(c for c in prep.columns if c.name == "age")
        assert age.mean is not None

    def test_holdout_fitness_keeps_test_untouched(self, tiny_csv_bytes):
        prep = prepare(
            tiny_csv_bytes,
            PipelineConfig(target_column="outcome", seed=3, holdout_fitness=True),
        )
        # fitness rows come from inside the training split, not the test split
        assert prep.split.X_eval.shape[0] < prep.split.X_train.shape[0]
        assert prep.X_test.shape[0] == 4
        assert prep.split.X_train.shape[0] + prep.split.X_eval.shape[0] == 16

    def test_deterministic(self, tiny_csv_bytes):
        a = prepare(tiny_csv_bytes, PipelineConfig(target_column="outcome", seed=5))
        b = prepare(tiny_csv_bytes, PipelineConfig(target_column="outcome", seed=5))
        assert np.array_equal(a.split.X_train, b.split.X_train)
        assert np.array_equal(a.X_test, b.X_test)

    def test_unknown_target(self, tiny_csv_bytes):
        with pytest.raises(DataError, match="no such column"):
            prepare(tiny_csv_bytes, PipelineConfig(target_column="nope"))
