"""Training losses: mean square error and categorical cross-entropy.

cce clips predicted probabilities at 1e-7 before the log, so a confidently
wrong prediction yields a large finite loss instead of infinity.
"""

from __future__ import annotations

import numpy as np

PROB_FLOOR = 1e-7


class EmptyBatch(ValueError):
    pass


def loss_mse(pred, target) -> float:
    """(1/N) sum (pred - target)^2."""
    pred = np.asarray(pred, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    if pred.shape != target.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {target.shape}")
    if pred.size == 0:
        raise EmptyBatch("mse of an empty batch")
    return float(np.mean((pred - target) ** 2))


def loss_cce(pred_probs, onehot) -> float:
    """-(1/N) sum_t sum_c y_tc ln(clip(p_tc)); rows of pred_probs sum to 1."""
    p = np.asarray(pred_probs, dtype=np.float64)
    y = np.asarray(onehot, dtype=np.float64)
    if p.ndim != 2 or p.shape != y.shape:
        raise ValueError(f"expected matching (N, C) arrays, got {p.shape} vs {y.shape}")
    if p.shape[0] == 0:
        raise EmptyBatch("cce of an empty batch")
    clipped = np.clip(p, PROB_FLOOR, 1.0)
    return float(-np.mean(np.sum(y * np.log(clipped), axis=1)))
