"""Classification metrics: accuracy, confusion matrix, per-class report."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class ConfusionMatrix:
    """Counts grid with rows = true class, columns = predicted class."""

    counts: np.ndarray
    class_names: list[str]

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass
class ClassReport:
    precision: float
    recall: float
    f1: float
    support: int


def accuracy(y_true, y_pred) -> float:
    """Fraction of matching labels."""
    t = np.asarray(y_true)
    p = np.asarray(y_pred)
    if t.shape != p.shape:
        raise ValueError("y_true and y_pred must have the same length")
    if t.size == 0:
        raise ValueError("cannot score empty inputs")
    return float((t == p).mean())


def confusion(y_true, y_pred, class_count: int, class_names=None) -> ConfusionMatrix:
    t = np.asarray(y_true, dtype=int)
    p = np.asarray(y_pred, dtype=int)
    if t.shape != p.shape:
        raise ValueError("y_true and y_pred must have the same length")
    if t.size and (t.min() < 0 or p.min() < 0 or t.max() >= class_count or p.max() >= class_count):
        raise ValueError(f"labels out of range [0, {class_count})")
    counts = np.zeros((class_count, class_count), dtype=np.int64)
    np.add.at(counts, (t, p), 1)
    if class_names is None:
        class_names = [str(i) for i in range(class_count)]
    return ConfusionMatrix(counts=counts, class_names=list(class_names))


def classification_report(cm: ConfusionMatrix) -> dict[str, ClassReport]:
    """Per-class precision/recall/F1 plus a 'macro avg' row.

    Zero denominators yield 0 rather than NaN, so small test splits that
    never predict some class still report cleanly.
    """
    counts = cm.counts
    out: dict[str, ClassReport] = {}
    per_class = []
    for i, name in enumerate(cm.class_names):
        tp = float(counts[i, i])
        fp = float(counts[:, i].sum() - counts[i, i])
        fn = float(counts[i, :].sum() - counts[i, i])
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        report = ClassReport(precision, recall, f1, int(counts[i, :].sum()))
        out[name] = report
        per_class.append(report)
    out["macro avg"] = ClassReport(
        precision=sum(r.precision for r in per_class) / len(per_class),
        recall=sum(r.recall for r in per_class) / len(per_class),
        f1=sum(r.f1 for r in per_class) / len(per_class),
        support=cm.total,
    )
    return out


def render_confusion(cm: ConfusionMatrix) -> str:
    """Aligned plain-text confusion matrix (shared by CLI and GUI console)."""
    names = cm.class_names
    width = max(8, max(len(n) for n in names) + 2)
    header = " " * width + "".join(f"{('pred ' + n):>{width}}" for n in names)
    lines = [header]
    for i, name in enumerate(names):
        row = f"{('true ' + name):>{width}}" + "".join(
            f"{int(v):>{width}}" for v in cm.counts[i]
        )
        lines.append(row)
    return "\n".join(lines)


def render_report(report: dict[str, ClassReport]) -> str:
    width = max(12, max(len(n) for n in report) + 2)
    lines = [f"{'':>{width}}  precision  recall      f1  support"]
    for name, r in report.items():
        lines.append(
            f"{name:>{width}}  {r.precision:>9.4f}  {r.recall:>6.4f}  {r.f1:>6.4f}  {r.support:>7d}"
        )
    return "\n".join(lines)


def report_as_dict(report: dict[str, ClassReport]) -> dict[str, dict[str, float]]:
    """JSON-friendly form of a classification report."""
    return {
        name: {
            "precision": r.precision,
            "recall": r.recall,
            "f1": r.f1,
            "support": r.support,
        }
        for name, r in report.items()
    }
