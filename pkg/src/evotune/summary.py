"""Final run summary shared by the CLI, the HTTP service, and the UI console."""

from __future__ import annotations

import numpy as np

from evotune.metrics import (
    ConfusionMatrix,
    accuracy,
    classification_report,
    confusion,
    render_confusion,
    report_as_dict,
)
from evotune.miga import TuningResult
from evotune.mlp import predict
from evotune.pipeline import PreparedData


def build_summary(prepared: PreparedData, result: TuningResult) -> dict:
    """Optimal configuration, runtimes, and test-set metrics as plain data."""
    best = result.best
    summary = {
        "best_chromosome": {
            "hidden_layers": list(best.hidden_layers),
            "activation": best.activation,
            "learning_rate": best.learning_rate,
            "solver": best.solver,
        },
        "best_fitness": result.best_fitness,
        "mode": result.mode,
        "tuning_time_s": result.total_time_s,
        "training_time_s": result.final_train_time_s,
        "generations": len(result.history),
    }
    if result.final_model is not None:
        y_pred = predict(result.final_model, prepared.X_test)
        cm = confusion(
            prepared.y_test,
            y_pred,
            len(prepared.class_names),
            class_names=prepared.class_names,
        )
        report = classification_report(cm)
        summary.update(
            {
                "test_accuracy": accuracy(prepared.y_test, y_pred),
                "confusion_matrix": cm.counts.tolist(),
                "class_names": list(prepared.class_names),
                "classification_report": report_as_dict(report),
            }
        )
    else:
        summary["error"] = "final model training diverged"
    return summary


def render_summary(summary: dict) -> str:
    """Plain-text view of a summary dict, arithmetic-free by design: every
    number shown is taken verbatim from the payload."""
    best = summary["best_chromosome"]
    hidden = ", ".join(str(h) for h in best["hidden_layers"])
    lines = [
        "Optimal configuration:",
        f"  hidden layers : ({hidden})",
        f"  activation    : {best['activation']}",
        f"  learning rate : {best['learning_rate']}",
        f"  solver        : {best['solver']}",
        f"Best fitness     : {summary['best_fitness']:.4f}",
        f"Tuning time      : {summary['tuning_time_s']:.2f} s ({summary['mode']})",
        f"Training time    : {summary['training_time_s']:.2f} s",
    ]
    if "test_accuracy" in summary:
        lines.append(f"Test accuracy    : {summary['test_accuracy']:.4f}")
        cm = ConfusionMatrix(
            counts=np.asarray(summary["confusion_matrix"], dtype=np.int64),
            class_names=list(summary["class_names"]),
        )
        lines += ["", render_confusion(cm), ""]
        report = summary["classification_report"]
        width = max(12, max(len(n) for n in report) + 2)
        lines.append(f"{'':>{width}}  precision  recall      f1  support")
        for name, r in report.items():
            lines.append(
                f"{name:>{width}}  {r['precision']:>9.4f}  {r['recall']:>6.4f}  "
                f"{r['f1']:>6.4f}  {r['support']:>7d}"
            )
    if "error" in summary:
        lines.append(f"Error            : {summary['error']}")
    return "\n".join(lines)
