"""Training loop: Adam over random manifest batches, best-validation weights.

Hyperparameters mirror the reference pipeline: batches of 16, learning rate
0.001 with beta1 0.9, beta2 0.999, epsilon 1e-8, amsgrad on, flips with
probability 0.5 per axis. The retained weights are the epoch checkpoint with
the lowest validation loss, and the per-epoch train/validation losses are
emitted as a CSV. Fixed seeds reproduce the loss curve up to floating-point
associativity (not bit-exact across hardware).
"""

from __future__ import annotations

import copy
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from .batches import TARGET_ORDER, load_image, make_batch
from .losses import PROB_FLOOR
from .manifest import Row
from .model import BasinCNN


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 16
    epochs: int = 20
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    amsgrad: bool = True
    flip_prob: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.batch_size < 1 or self.epochs < 1:
            raise ConfigError("batch_size and epochs must be >= 1")
        if not 0.0 <= self.flip_prob <= 1.0:
            raise ConfigError("flip_prob must lie in [0, 1]")


@dataclass
class TrainResult:
    best_state: dict
    best_epoch: int
    best_val_loss: float
    history: list[tuple[int, float, float]]  # (epoch, train_loss, val_loss)


def _target_index(metric: str) -> int:
    return TARGET_ORDER.index(metric)


def _batch_to_tensors(images: np.ndarray, targets: np.ndarray, metric: str):
    x = torch.from_numpy(np.ascontiguousarray(images)).permute(0, 3, 1, 2)
    t = targets[:, _target_index(metric)]
    return x, torch.from_numpy(np.ascontiguousarray(t))


def _torch_loss(model: BasinCNN, x: torch.Tensor, t: torch.Tensor, metric: str):
    out = model(x)
    if metric == "wada":
        probs = torch.softmax(out, dim=1).clamp(min=PROB_FLOOR)
        onehot = torch.stack([1.0 - t, t], dim=1)
        return -(onehot * probs.log()).sum(dim=1).mean()
    return ((out[:, 0] - t) ** 2).mean()


def _full_pass_loss(model: BasinCNN, rows: list[Row], metric: str,
                    batch_size: int) -> float:
    model.eval()
    losses = []
    with torch.no_grad():
        for lo in range(0, len(rows), batch_size):
            chunk = rows[lo:lo + batch_size]
            images = np.stack([load_image(r.path) for r in chunk])
            targets = np.array([[r.target(m) if r.target(m) is not None else np.nan
                                 for m in TARGET_ORDER] for r in chunk], dtype=np.float32)
            x, t = _batch_to_tensors(images, targets, metric)
            losses.append(float(_torch_loss(model, x, t, metric)) * len(chunk))
    model.train()
    return sum(losses) / len(rows)


def train(model: BasinCNN, train_rows: list[Row], val_rows: list[Row],
          metric: str, config: TrainConfig) -> TrainResult:
    """Adam training with per-epoch validation; keeps the best-val weights."""
    if not train_rows:
        raise ConfigError("training split is empty")
    if not val_rows:
        raise ConfigError("validation split is empty")
    torch.manual_seed(config.seed)
    rng = np.random.default_rng(config.seed)
    optimizer = torch.optim.Adam(
        model.parameters(), lr=config.learning_rate,
        betas=(config.beta1, config.beta2), eps=config.epsilon,
        amsgrad=config.amsgrad,
    )
    steps_per_epoch = max(1, len(train_rows) // config.batch_size)
    best_state = copy.deepcopy(model.state_dict())
    best_val = float("inf")
    best_epoch = 0
    history = []
    model.train()
    for epoch in range(1, config.epochs + 1):
        epoch_losses = []
        for _ in range(steps_per_epoch):
            images, targets = make_batch(train_rows, rng, config.batch_size,
                                         config.flip_prob)
            x, t = _batch_to_tensors(images, targets, metric)
            optimizer.zero_grad()
            loss = _torch_loss(model, x, t, metric)
            loss.backward()
            optimizer.step()
            epoch_losses.append(float(loss.detach()))
        val_loss = _full_pass_loss(model, val_rows, metric, config.batch_size)
        train_loss = float(np.mean(epoch_losses))
        history.append((epoch, train_loss, val_loss))
        if val_loss < best_val:
            best_val = val_loss
            best_epoch = epoch
            best_state = copy.deepcopy(model.state_dict())
    return TrainResult(best_state=best_state, best_epoch=best_epoch,
                       best_val_loss=best_val, history=history)


def write_loss_curve(history: list[tuple[int, float, float]], path) -> None:
    lines = ["epoch,train_loss,val_loss"]
    for epoch, train_loss, val_loss in history:
        lines.append(f"{epoch},{train_loss:.10g},{val_loss:.10g}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
