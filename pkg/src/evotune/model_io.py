"""Versioned JSON model files: preprocessing stats + optional KPCA + MLP.

The format is documented in docs/model-format.md. Floats go through the
json module's repr-based encoding (shortest round-trip form), so a
save/load cycle reproduces every 64-bit parameter exactly.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from evotune.dataset import DEFAULT_MISSING_TOKENS, NUMERIC, class_name_of
from evotune.kpca import KpcaModel
from evotune.kpca import transform as kpca_transform
from evotune.mlp import MlpModel
from evotune.mlp import predict_proba as mlp_predict_proba
from evotune.pipeline import ColumnSpec, PreparedData

MODEL_FORMAT = "evotune-model"
MODEL_VERSION = 1


class ModelFormatError(ValueError):
    """Model file is not a valid evotune model document."""


class RowSchemaError(ValueError):
    """Prediction rows do not match the model's column schema."""

    def __init__(self, message: str, missing=None, unknown=None):
        super().__init__(message)
        self.missing = sorted(missing or [])
        self.unknown = sorted(unknown or [])


@dataclass
class ModelBundle:
    """A trained model plus everything needed to score raw CSV/JSON rows."""

    target_column: str
    class_names: list[str]
    columns: list[ColumnSpec]
    feature_names: list[str]
    use_standardize: bool
    means: np.ndarray | None
    stds: np.ndarray | None
    kpca: KpcaModel | None
    mlp: MlpModel
    train_config: dict
    missing_tokens: list[str] = field(
        default_factory=lambda: sorted(DEFAULT_MISSING_TOKENS)
    )


def bundle_from_run(
    prepared: PreparedData, mlp_model: MlpModel, train_config: dict
) -> ModelBundle:
    return ModelBundle(
        target_column=prepared.config.target_column,
        class_names=list(prepared.class_names),
        columns=list(prepared.columns),
        feature_names=list(prepared.feature_names),
        use_standardize=prepared.config.use_standardize,
        means=prepared.means,
        stds=prepared.stds,
        kpca=prepared.kpca_model,
        mlp=mlp_model,
        train_config=dict(train_config),
    )


def _array(values) -> np.ndarray:
    return np.asarray(values, dtype=float)


def bundle_to_dict(bundle: ModelBundle) -> dict:
    doc = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "target_column": bundle.target_column,
        "class_names": list(bundle.class_names),
        "config": bundle.train_config,
        "preprocessing": {
            "columns": [
                {
                    "name": c.name,
                    "kind": c.kind,
                    "mean": c.mean,
                    "mode": c.mode,
                    "categories": list(c.categories),
                }
                for c in bundle.columns
            ],
            "feature_names": list(bundle.feature_names),
            "standardize": bundle.use_standardize,
            "means": None if bundle.means is None else bundle.means.tolist(),
            "stds": None if bundle.stds is None else bundle.stds.tolist(),
            "missing_tokens": list(bundle.missing_tokens),
        },
        "kpca": None,
        "mlp": {
            "activation": bundle.mlp.activation,
            "class_count": bundle.mlp.class_count,
            "weights": [w.tolist() for w in bundle.mlp.weights],
            "biases": [b.tolist() for b in bundle.mlp.biases],
        },
    }
    if bundle.kpca is not None:
        k = bundle.kpca
        doc["kpca"] = {
            "gamma": k.gamma,
            "n_components": k.n_components,
            "variance_target": k.variance_target,
            "eigenvalues": k.eigenvalues.tolist(),
            "train_rows": k.train_rows.tolist(),
            "alphas": k.alphas[:, : k.n_components].tolist(),
            "k_row_means": k.k_row_means.tolist(),
            "k_grand_mean": k.k_grand_mean,
        }
    return doc


def bundle_from_dict(doc: dict) -> ModelBundle:
    if not isinstance(doc, dict) or doc.get("format") != MODEL_FORMAT:
        raise ModelFormatError("not an evotune model file")
    if doc.get("version") != MODEL_VERSION:
        raise ModelFormatError(f"unsupported model version: {doc.get('version')!r}")
    pre = doc["preprocessing"]
    columns = [
        ColumnSpec(
            name=c["name"],
            kind=c["kind"],
            mean=c.get("mean"),
            mode=c.get("mode"),
            categories=list(c.get("categories") or []),
        )
        for c in pre["columns"]
    ]
    kpca = None
    if doc.get("kpca") is not None:
        k = doc["kpca"]
        kpca = KpcaModel(
            train_rows=_array(k["train_rows"]),
            gamma=float(k["gamma"]),
            eigenvalues=_array(k["eigenvalues"]),
            alphas=_array(k["alphas"]),
            k_row_means=_array(k["k_row_means"]),
            k_grand_mean=float(k["k_grand_mean"]),
            n_components=int(k["n_components"]),
            variance_target=float(k["variance_target"]),
        )
    m = doc["mlp"]
    mlp = MlpModel(
        weights=[_array(w) for w in m["weights"]],
        biases=[_array(b) for b in m["biases"]],
        activation=m["activation"],
        class_count=int(m["class_count"]),
    )
    return ModelBundle(
        target_column=doc["target_column"],
        class_names=list(doc["class_names"]),
        columns=columns,
        feature_names=list(pre["feature_names"]),
        use_standardize=bool(pre["standardize"]),
        means=None if pre["means"] is None else _array(pre["means"]),
        stds=None if pre["stds"] is None else _array(pre["stds"]),
        kpca=kpca,
        mlp=mlp,
        train_config=dict(doc.get("config") or {}),
        missing_tokens=list(pre.get("missing_tokens") or sorted(DEFAULT_MISSING_TOKENS)),
    )


def save_model(bundle: ModelBundle, path) -> None:
    doc = bundle_to_dict(bundle)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, allow_nan=False)


def load_model(path) -> ModelBundle:
    if isinstance(path, (str, os.PathLike)):
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = json.load(path)
    return bundle_from_dict(doc)


def _is_missing_value(value, tokens: set[str]) -> bool:
    if value is None:
        return True
    if isinstance(value, float) and math.isnan(value):
        return True
    return isinstance(value, str) and value.strip() in tokens


def encode_rows(
    bundle: ModelBundle, rows: list[dict], strict_columns: bool = True
) -> np.ndarray:
    """Encode raw row dicts into the model's feature space.

    Missing values are imputed with stored train statistics. With
    ``strict_columns`` every feature column key must be present and no
    unknown keys are allowed; otherwise extra keys (such as the target
    column) are ignored and absent columns are treated as missing.
    """
    if not rows:
        raise RowSchemaError("no rows given")
    tokens = set(bundle.missing_tokens)
    expected = {c.name for c in bundle.columns}
    if strict_columns:
        missing: set[str] = set()
        unknown: set[str] = set()
        for row in rows:
            keys = set(row)
            missing |= expected - keys
            unknown |= keys - expected - {bundle.target_column}
        if missing or unknown:
            parts = []
            if missing:
                parts.append(f"missing columns: {sorted(missing)}")
            if unknown:
                parts.append(f"unknown columns: {sorted(unknown)}")
            raise RowSchemaError("; ".join(parts), missing=missing, unknown=unknown)

    out = np.zeros((len(rows), len(bundle.feature_names)))
    col_start = 0
    for spec in bundle.columns:
        if spec.kind == NUMERIC:
            for i, row in enumerate(rows):
                value = row.get(spec.name)
                if _is_missing_value(value, tokens):
                    out[i, col_start] = spec.mean if spec.mean is not None else 0.0
                else:
                    try:
                        out[i, col_start] = float(value)
                    except (TypeError, ValueError):
                        raise RowSchemaError(
                            f"row {i}: column {spec.name!r} expects a number, "
                            f"got {value!r}"
                        ) from None
            col_start += 1
        else:
            index = {cat: k for k, cat in enumerate(spec.categories)}
            for i, row in enumerate(rows):
                value = row.get(spec.name)
                if _is_missing_value(value, tokens):
                    value = spec.mode
                k = index.get(class_name_of(value) if value is not None else "")
                if k is not None:
                    out[i, col_start + k] = 1.0
                # unseen category: leave the block all-zero
            col_start += len(spec.categories)
    return out


def predict_rows(
    bundle: ModelBundle, rows: list[dict], strict_columns: bool = True
) -> tuple[list[str], np.ndarray]:
    """Class name and probability vector for each raw row."""
    X = encode_rows(bundle, rows, strict_columns=strict_columns)
    if bundle.use_standardize:
        divisors = np.where(bundle.stds == 0.0, 1.0, bundle.stds)
        X = (X - bundle.means) / divisors
    if bundle.kpca is not None:
        X = kpca_transform(bundle.kpca, X)
    probs = mlp_predict_proba(bundle.mlp, X)
    labels = np.argmax(probs, axis=1)
    return [bundle.class_names[int(k)] for k in labels], probs
