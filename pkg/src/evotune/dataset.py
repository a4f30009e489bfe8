"""CSV parsing, imputation, one-hot encoding, standardization, and splitting.

Everything here is a pure transformation: functions take immutable inputs
and return new values, so prepared data can be shared freely across the
tuner's worker pool.
"""

from __future__ import annotations

import csv
import io
import math
import os
from dataclasses import dataclass, field

import numpy as np

NUMERIC = "numeric"
CATEGORICAL = "categorical"

DEFAULT_MISSING_TOKENS = frozenset({"", "?", "NaN", "nan"})


class DataError(ValueError):
    """Structural problem in input data (bad CSV, bad column, bad labels)."""


@dataclass
class TabularDataset:
    """A parsed CSV: raw cells plus per-column kind, with missing cells as None.

    Numeric cells are stored as float, categorical cells as stripped strings.
    """

    column_names: list[str]
    column_kinds: list[str]
    cells: list[list[object]]

    @property
    def n_rows(self) -> int:
        return len(self.cells)

    @property
    def n_cols(self) -> int:
        return len(self.column_names)

    def column_index(self, name: str) -> int:
        try:
            return self.column_names.index(name)
        except ValueError:
            raise DataError(f"no such column: {name!r}") from None

    def column(self, name: str) -> list[object]:
        j = self.column_index(name)
        return [row[j] for row in self.cells]

    def missing_count(self) -> int:
        return sum(cell is None for row in self.cells for cell in row)

    def missing_count_by_column(self) -> list[int]:
        counts = [0] * self.n_cols
        for row in self.cells:
            for j, cell in enumerate(row):
                if cell is None:
                    counts[j] += 1
        return counts


@dataclass
class EncodedMatrix:
    """Fully numeric features plus integer class labels, after encoding."""

    features: np.ndarray
    labels: np.ndarray
    feature_names: list[str]
    class_names: list[str]

    @property
    def n_rows(self) -> int:
        return self.features.shape[0]


@dataclass
class SplitPair:
    """Disjoint train/test partition of an EncodedMatrix, seeded and stratified."""

    train: EncodedMatrix
    test: EncodedMatrix
    seed: int
    train_indices: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int))
    test_indices: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=int))


def _parse_number(text: str) -> float | None:
    try:
        value = float(text)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def load_csv(source, missing_tokens=DEFAULT_MISSING_TOKENS) -> TabularDataset:
    """Parse a header-first CSV into a TabularDataset.

    ``source`` may be a filesystem path, raw bytes, or a readable text/binary
    stream. Cells are stripped of surrounding whitespace; a cell equal to one
    of ``missing_tokens`` is marked missing. A column is numeric iff every
    non-missing cell parses as a finite number.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return load_csv(fh, missing_tokens)
    if isinstance(source, bytes):
        return load_csv(io.StringIO(source.decode("utf-8")), missing_tokens)
    if hasattr(source, "read"):
        raw = source.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
        stream = io.StringIO(raw)
    else:
        raise TypeError(f"unsupported source type: {type(source).__name__}")

    reader = csv.reader(stream)
    try:
        header = next(reader)
    except StopIteration:
        raise DataError("empty file: no header row") from None
    header = [name.strip() for name in header]
    n_cols = len(header)

    rows: list[list[str | None]] = []
    for record_no, record in enumerate(reader, start=2):
        if len(record) != n_cols:
            raise DataError(
                f"row {record_no}: expected {n_cols} fields, got {len(record)}"
            )
        cleaned: list[str | None] = []
        for raw_cell in record:
            cell = raw_cell.strip()
            cleaned.append(None if cell in missing_tokens else cell)
        rows.append(cleaned)
    if not rows:
        raise DataError("empty file: no data rows")

    kinds = []
    for j in range(n_cols):
        observed = [row[j] for row in rows if row[j] is not None]
        is_numeric = all(_parse_number(cell) is not None for cell in observed)
        kinds.append(NUMERIC if is_numeric else CATEGORICAL)

    cells: list[list[object]] = []
    for row in rows:
        out: list[object] = []
        for j, cell in enumerate(row):
            if cell is None:
                out.append(None)
            elif kinds[j] == NUMERIC:
                out.append(float(cell))
            else:
                out.append(cell)
        cells.append(out)

    return TabularDataset(column_names=header, column_kinds=kinds, cells=cells)


def knn_impute(matrix: np.ndarray, k: int = 5) -> np.ndarray:
    """Fill NaN entries with the mean of that feature over the k nearest rows.

    Row distance is Euclidean over mutually observed coordinates, rescaled by
    the fraction of coordinates that are mutually observed:

        d(i, j)^2 = (n_cols / |O_ij|) * sum_{c in O_ij} (x_ic - x_jc)^2

    Donor rows for a missing entry must have that feature observed; ties in
    distance are broken by original row index. Observed entries are returned
    unchanged.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    X = np.asarray(matrix, dtype=float)
    if X.ndim != 2:
        raise ValueError("matrix must be 2-D")
    out = X.copy()
    observed = np.isfinite(X)
    if observed.all():
        return out

    fully_missing = np.where(~observed.any(axis=0))[0]
    if fully_missing.size:
        raise DataError(f"column {fully_missing[0]} is entirely missing")

    n, d = X.shape
    Xz = np.where(observed, X, 0.0)
    sq = Xz * Xz
    mask = observed.astype(float)
    cross = Xz @ Xz.T
    s1 = sq @ mask.T
    s2 = mask @ sq.T
    counts = mask @ mask.T
    with np.errstate(divide="ignore", invalid="ignore"):
        dist2 = (s1 + s2 - 2.0 * cross) * (d / counts)
    dist2 = np.where(counts > 0, np.maximum(dist2, 0.0), np.inf)

    for i, j in zip(*np.where(~observed)):
        donors = np.where(observed[:, j])[0]
        order = np.argsort(dist2[i, donors], kind="stable")
        chosen = donors[order[:k]]
        out[i, j] = X[chosen, j].mean()
    return out


def _impute_categorical_mode(values: list[object]) -> object:
    counts: dict[object, int] = {}
    for v in values:
        if v is not None:
            counts[v] = counts.get(v, 0) + 1
    best = max(counts.items(), key=lambda kv: (kv[1], ), default=None)
    if best is None:
        return None
    # break count ties by lexicographically smallest category
    top = best[1]
    return min(v for v, c in counts.items() if c == top)


def impute_dataset(ds: TabularDataset, target_column: str, k: int = 5) -> TabularDataset:
    """Fill missing feature cells: per-column mode for categoricals, then KNN
    over the numeric columns. The target column is left untouched."""
    t = ds.column_index(target_column)
    cells = [list(row) for row in ds.cells]

    for j in range(ds.n_cols):
        if j == t or ds.column_kinds[j] != CATEGORICAL:
            continue
        col = [row[j] for row in cells]
        if any(v is None for v in col):
            mode = _impute_categorical_mode(col)
            if mode is None:
                raise DataError(f"column {ds.column_names[j]!r} is entirely missing")
            for row in cells:
                if row[j] is None:
                    row[j] = mode

    numeric_cols = [
        j for j in range(ds.n_cols) if j != t and ds.column_kinds[j] == NUMERIC
    ]
    if numeric_cols:
        M = np.full((ds.n_rows, len(numeric_cols)), np.nan)
        for jj, j in enumerate(numeric_cols):
            for i, row in enumerate(cells):
                if row[j] is not None:
                    M[i, jj] = row[j]
        if not np.isfinite(M).all():
            missing_cols = np.where(~np.isfinite(M).any(axis=0))[0]
            if missing_cols.size:
                name = ds.column_names[numeric_cols[missing_cols[0]]]
                raise DataError(f"column {name!r} is entirely missing")
            M = knn_impute(M, k=k)
            for jj, j in enumerate(numeric_cols):
                for i, row in enumerate(cells):
                    if row[j] is None:
                        row[j] = float(M[i, jj])

    return TabularDataset(
        column_names=list(ds.column_names),
        column_kinds=list(ds.column_kinds),
        cells=cells,
    )


def class_name_of(value: object) -> str:
    """Render a target cell as a class name (integral floats lose the '.0')."""
    if isinstance(value, float) and value.is_integer():
        return str(int(value))
    return str(value)


def one_hot_encode(ds: TabularDataset, target_column: str) -> EncodedMatrix:
    """Expand categorical features into indicator columns and map the target
    to integer ids.

    Categories and class names are sorted lexicographically so the encoding
    is deterministic. Feature cells must already be imputed.
    """
    t = ds.column_index(target_column)

    target_cells = [row[t] for row in ds.cells]
    observed_targets = [v for v in target_cells if v is not None]
    if not observed_targets:
        raise DataError(f"target column {target_column!r} is entirely missing")
    missing_rows = [i for i, v in enumerate(target_cells) if v is None]
    if missing_rows:
        raise DataError(
            f"target column {target_column!r} has missing values "
            f"(first at data row {missing_rows[0] + 1})"
        )
    class_names = sorted({class_name_of(v) for v in observed_targets})
    if len(class_names) < 2:
        raise DataError(
            f"target column {target_column!r} needs >= 2 distinct values, "
            f"found {len(class_names)}"
        )
    class_id = {name: i for i, name in enumerate(class_names)}
    labels = np.array([class_id[class_name_of(v)] for v in target_cells], dtype=np.int64)

    columns: list[np.ndarray] = []
    feature_names: list[str] = []
    for j in range(ds.n_cols):
        if j == t:
            continue
        name = ds.column_names[j]
        col = [row[j] for row in ds.cells]
        if any(v is None for v in col):
            raise DataError(f"column {name!r} has missing cells; impute before encoding")
        if ds.column_kinds[j] == NUMERIC:
            columns.append(np.asarray(col, dtype=float))
            feature_names.append(name)
        else:
            categories = sorted({str(v) for v in col})
            for cat in categories:
                columns.append(np.array([1.0 if str(v) == cat else 0.0 for v in col]))
                feature_names.append(f"{name}={cat}")

    features = (
        np.column_stack(columns) if columns else np.empty((ds.n_rows, 0), dtype=float)
    )
    return EncodedMatrix(
        features=features,
        labels=labels,
        feature_names=feature_names,
        class_names=class_names,
    )


def standardize(
    train: EncodedMatrix, test: EncodedMatrix
) -> tuple[EncodedMatrix, EncodedMatrix, np.ndarray, np.ndarray]:
    """Z-score both splits using train-set statistics.

    Features with zero train std are shifted only. Returns the transformed
    splits together with the (means, stds) actually recorded, stds keeping
    their raw zeros.
    """
    if train.n_rows == 0:
        raise DataError("cannot standardize an empty training split")
    means = train.features.mean(axis=0)
    stds = train.features.std(axis=0)
    divisors = np.where(stds == 0.0, 1.0, stds)

    def apply(m: EncodedMatrix) -> EncodedMatrix:
        return EncodedMatrix(
            features=(m.features - means) / divisors,
            labels=m.labels.copy(),
            feature_names=list(m.feature_names),
            class_names=list(m.class_names),
        )

    return apply(train), apply(test), means, stds


def apply_standardization(
    features: np.ndarray, means: np.ndarray, stds: np.ndarray
) -> np.ndarray:
    """Apply previously recorded train statistics to new rows."""
    divisors = np.where(stds == 0.0, 1.0, stds)
    return (features - means) / divisors


def train_test_split(
    m: EncodedMatrix, ratio: float = 0.8, seed: int = 0, stratify: bool = True
) -> SplitPair:
    """Seeded shuffle split with |train| = floor(ratio * n_rows).

    Stratified mode cuts floor(ratio * class_count) per class, then moves the
    next shuffled row of the classes with the largest fractional remainders
    from test to train until the global train size is reached.
    """
    if not 0.0 < ratio < 1.0:
        raise DataError(f"ratio must be in (0, 1), got {ratio}")
    n = m.n_rows
    target_train = int(math.floor(ratio * n))
    rng = np.random.default_rng(seed)

    if stratify:
        class_ids, counts = np.unique(m.labels, return_counts=True)
        small = class_ids[counts < 2]
        if small.size:
            name = m.class_names[int(small[0])]
            raise DataError(f"class {name!r} has fewer than 2 rows")
        per_class: dict[int, np.ndarray] = {}
        cuts: dict[int, int] = {}
        for c in class_ids:
            idx = np.where(m.labels == c)[0]
            per_class[int(c)] = idx[rng.permutation(idx.size)]
            cuts[int(c)] = int(math.floor(ratio * idx.size))
        deficit = target_train - sum(cuts.values())
        if deficit > 0:
            remainders = sorted(
                class_ids,
                key=lambda c: (-((ratio * per_class[int(c)].size) % 1.0), int(c)),
            )
            for c in remainders[:deficit]:
                cuts[int(c)] += 1
        train_idx = np.concatenate(
            [per_class[int(c)][: cuts[int(c)]] for c in class_ids]
        )
        test_idx = np.concatenate(
            [per_class[int(c)][cuts[int(c)]:] for c in class_ids]
        )
    else:
        order = rng.permutation(n)
        train_idx, test_idx = order[:target_train], order[target_train:]

    train_idx = np.sort(train_idx)
    test_idx = np.sort(test_idx)

    def take(idx: np.ndarray) -> EncodedMatrix:
        return EncodedMatrix(
            features=m.features[idx].copy(),
            labels=m.labels[idx].copy(),
            feature_names=list(m.feature_names),
            class_names=list(m.class_names),
        )

    return SplitPair(
        train=take(train_idx),
        test=take(test_idx),
        seed=seed,
        train_indices=train_idx,
        test_indices=test_idx,
    )
