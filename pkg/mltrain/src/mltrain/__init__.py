"""Toy-scale CNN training over basin dataset manifests.

Consumes the dataset CSV manifest and PNG basin images, trains one small
residual CNN per metric (fractal dimension, basin entropy, boundary basin
entropy as regressions; Wada as a 2-way classifier), and evaluates on the
test split with resampled-subset accuracy and confusion counts.
"""

from .batches import draw_flips, load_image, make_batch
from .evaluate import EvalReport, evaluate, write_confusion_csv
from .losses import EmptyBatch, loss_cce, loss_mse
from .manifest import METRICS, Row, read_rows, rows_with_target, split_rows
from .model import BasinCNN, build_model, parameter_count
from .train import ConfigError, TrainConfig, TrainResult, train, write_loss_curve

__version__ = "0.1.0"

__all__ = [
    "BasinCNN",
    "ConfigError",
    "EmptyBatch",
    "EvalReport",
    "METRICS",
    "Row",
    "TrainConfig",
    "TrainResult",
    "build_model",
    "draw_flips",
    "evaluate",
    "load_image",
    "loss_cce",
    "loss_mse",
    "make_batch",
    "parameter_count",
    "read_rows",
    "rows_with_target",
    "split_rows",
    "train",
    "write_confusion_csv",
    "write_loss_curve",
]
