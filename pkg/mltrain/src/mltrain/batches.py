"""Manifest-driven batch generation with flip augmentation.

Batches sample rows uniformly with replacement, load each grayscale image
from disk, scale pixels to [0, 1] by dividing by 255, and flip each image
horizontally and vertically with independent probability ``flip_prob``.
Basin metrics are flip invariant, so the targets ride along unchanged.

Per batch the generator draws, in order: the row indices, the horizontal
flip flags, then the vertical flip flags, so a fixed seed reproduces the
exact sample sequence.
"""

from __future__ import annotations

import sys

import numpy as np
from PIL import Image

from .manifest import Row

TARGET_ORDER = ("fdim", "sb", "sbb", "wada")


def load_image(path) -> np.ndarray:
    """(H, W, 1) float32 in [0, 1]."""
    with Image.open(path) as img:
        if img.mode != "L":
            img = img.convert("L")
        arr = np.asarray(img, dtype=np.float32) / 255.0
    return arr[:, :, None]


def draw_flips(rng: np.random.Generator, count: int, flip_prob: float):
    """Per-image horizontal and vertical flip flags."""
    horizontal = rng.random(count) < flip_prob
    vertical = rng.random(count) < flip_prob
    return horizontal, vertical


def _targets(row: Row) -> np.ndarray:
    values = [row.target(m) for m in TARGET_ORDER]
    return np.array([np.nan if v is None else v for v in values], dtype=np.float32)


def make_batch(
    rows: list[Row],
    rng: np.random.Generator,
    batch_size: int = 16,
    flip_prob: float = 0.5,
    loader=None,
):
    """(images (B, H, W, 1), targets (B, 4)) sampled uniformly with replacement.

    ``loader`` defaults to reading PNGs from disk; tests and prefetchers can
    inject a caching loader. Unreadable images are skipped with a warning
    and resampled.
    """
    if not rows:
        raise ValueError("cannot build a batch from an empty row list")
    load = loader or load_image
    indices = rng.integers(0, len(rows), size=batch_size)
    images = []
    targets = []
    for idx in indices:
        row = rows[int(idx)]
        while True:
            try:
                images.append(load(row.path))
                targets.append(_targets(row))
                break
            except OSError as exc:
                print(f"warning: skipping unreadable image {row.path}: {exc}",
                      file=sys.stderr)
                row = rows[int(rng.integers(0, len(rows)))]
    horizontal, vertical = draw_flips(rng, batch_size, flip_prob)
    stack = np.stack(images, axis=0)
    for i in range(batch_size):
        if horizontal[i]:
            stack[i] = stack[i, :, ::-1, :]
        if vertical[i]:
            stack[i] = stack[i, ::-1, :, :]
    return stack, np.stack(targets, axis=0)
