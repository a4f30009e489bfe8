"""Walk a messy CSV through imputation, encoding, and the stratified split.

The fixture mimics a small clinical table: numeric vitals with missing
cells marked '?', categorical findings, and a text label column.
"""

import numpy as np

from evotune.dataset import (
    impute_dataset,
    load_csv,
    one_hot_encode,
    standardize,
    train_test_split,
)

ds = load_csv("tests/data/ckd_synthetic.csv")
print(f"loaded {ds.n_rows} rows x {ds.n_cols} columns, "
      f"{ds.missing_count()} missing cells")

kinds = dict(zip(ds.column_names, ds.column_kinds))
print("column kinds:", {k: v for k, v in list(kinds.items())[:6]}, "...")

# categorical gaps fill with the per-column mode, numeric gaps with the
# mean of the 5 nearest rows (distance over mutually observed coordinates)
imputed = impute_dataset(ds, target_column="classification", k=5)
print("after imputation:", imputed.missing_count(), "missing cells")

encoded = one_hot_encode(imputed, target_column="classification")
print(f"encoded matrix: {encoded.features.shape}, classes {encoded.class_names}")
print("first encoded feature names:", encoded.feature_names[:8])

pair = train_test_split(encoded, ratio=0.8, seed=0)
print(f"split: {pair.train.n_rows} train / {pair.test.n_rows} test")
for c, name in enumerate(encoded.class_names):
    print(f"  class {name}: {(pair.train.labels == c).sum()} train, "
          f"{(pair.test.labels == c).sum()} test")

train_m, test_m, means, stds = standardize(pair.train, pair.test)
print("train feature means after z-scoring:",
      np.abs(train_m.features.mean(axis=0)).max())
