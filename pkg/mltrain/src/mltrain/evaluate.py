"""Test-set evaluation: error statistics, resampled Wada accuracy, confusion.

Regression metrics report the mean and standard deviation of prediction
errors (predicted minus true) plus the raw error list for histogramming.
The Wada classifier reports accuracy over K random subsets of size M drawn
with replacement (desk-scale stand-in for the reference 1000 x 1000
protocol) and 2x2 confusion counts that sum to the evaluated image count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from .batches import load_image
from .manifest import Row
from .model import BasinCNN
from .train import ConfigError, _batch_to_tensors, TARGET_ORDER


@dataclass
class EvalReport:
    metric: str
    count: int
    mu: float | None = None
    sigma: float | None = None
    errors: list[float] = field(default_factory=list)
    wada_accuracy_mean: float | None = None
    wada_accuracy_std: float | None = None
    confusion: dict | None = None

    def to_json(self) -> str:
        payload = {
            "metric": self.metric,
            "count": self.count,
            "mu": self.mu,
            "sigma": self.sigma,
            "errors": self.errors,
            "wada_accuracy_mean": self.wada_accuracy_mean,
            "wada_accuracy_std": self.wada_accuracy_std,
            "confusion": self.confusion,
        }
        return json.dumps(payload, indent=2) + "\n"


def _predict(model: BasinCNN, rows: list[Row], metric: str, batch_size: int = 16):
    preds = []
    trues = []
    model.eval()
    with torch.no_grad():
        for lo in range(0, len(rows), batch_size):
            chunk = rows[lo:lo + batch_size]
            images = np.stack([load_image(r.path) for r in chunk])
            targets = np.array([[r.target(m) if r.target(m) is not None else np.nan
                                 for m in TARGET_ORDER] for r in chunk],
                               dtype=np.float32)
            x, t = _batch_to_tensors(images, targets, metric)
            out = model(x)
            if metric == "wada":
                preds.append(out.argmax(dim=1).numpy())
            else:
                preds.append(out[:, 0].numpy())
            trues.append(t.numpy())
    return np.concatenate(preds), np.concatenate(trues)


def evaluate(model: BasinCNN, rows: list[Row], metric: str,
             subset_k: int = 100, subset_m: int | None = None,
             seed: int = 0) -> EvalReport:
    if not rows:
        raise ConfigError("evaluation split is empty")
    preds, trues = _predict(model, rows, metric)
    if metric != "wada":
        errors = preds - trues
        return EvalReport(
            metric=metric, count=len(rows),
            mu=float(errors.mean()),
            sigma=float(errors.std(ddof=1)) if errors.size > 1 else 0.0,
            errors=[float(e) for e in errors],
        )

    truth = trues.astype(np.int64)
    guess = preds.astype(np.int64)
    confusion = {
        "true_not_wada_pred_not_wada": int(np.sum((truth == 0) & (guess == 0))),
        "true_not_wada_pred_wada": int(np.sum((truth == 0) & (guess == 1))),
        "true_wada_pred_not_wada": int(np.sum((truth == 1) & (guess == 0))),
        "true_wada_pred_wada": int(np.sum((truth == 1) & (guess == 1))),
    }
    rng = np.random.default_rng(seed)
    m = min(subset_m or 100, len(rows))
    correct = guess == truth
    accuracies = np.empty(subset_k)
    for k in range(subset_k):
        sample = rng.integers(0, len(rows), size=m)
        accuracies[k] = correct[sample].mean()
    return EvalReport(
        metric=metric, count=len(rows),
        wada_accuracy_mean=float(accuracies.mean()),
        wada_accuracy_std=float(accuracies.std(ddof=1)) if subset_k > 1 else 0.0,
        confusion=confusion,
    )


def write_confusion_csv(report: EvalReport, path) -> None:
    if report.confusion is None:
        raise ValueError("confusion counts are only produced for the wada metric")
    c = report.confusion
    lines = [
        "true,pred_not_wada,pred_wada",
        f"not_wada,{c['true_not_wada_pred_not_wada']},{c['true_not_wada_pred_wada']}",
        f"wada,{c['true_wada_pred_not_wada']},{c['true_wada_pred_wada']}",
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
