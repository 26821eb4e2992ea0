"""Basin data model: label grids over a phase-space rectangle.

A basin is stored as a 2D array of small integer attractor ids, one per
initial condition, exactly as it will be written to an 8-bit grayscale image.
Row ``i``, column ``j`` corresponds to the cell-centered initial condition
``(x_min + (j + 1/2) dx, y_min + (i + 1/2) dy)``.

The id 255 is reserved for trajectories that never classified within the
integration budget; real attractor ids are assigned from 0 upward, so they
can never collide with it (the systems here have at most five attractors).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidPermutation

UNRESOLVED_ID = 255


@dataclass(frozen=True)
class Region:
    """Axis-aligned phase-space rectangle sampled at ``resolution`` pixels per axis."""

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    resolution: int

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min must be < x_max, got [{self.x_min}, {self.x_max}]")
        if not self.y_min < self.y_max:
            raise ValueError(f"y_min must be < y_max, got [{self.y_min}, {self.y_max}]")
        if self.resolution < 2:
            raise ValueError(f"resolution must be >= 2, got {self.resolution}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.resolution

    @property
    def dy(self) -> float:
        return (self.y_max - self.y_min) / self.resolution

    def x_centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.resolution) + 0.5) * self.dx

    def y_centers(self) -> np.ndarray:
        return self.y_min + (np.arange(self.resolution) + 0.5) * self.dy


@dataclass(frozen=True, eq=False)
class BasinGrid:
    """Immutable grid of attractor labels.

    ``labels`` is a row-major (height, width) uint8 array. ``num_labels`` is
    the size of the real attractor id space; freshly generated grids carry ids
    forming the prefix 0..num_labels-1 (plus possibly ``unresolved_id``), while
    grids produced by merging keep their surviving original ids.
    """

    labels: np.ndarray
    num_labels: int
    region: Region | None = None
    unresolved_id: int = UNRESOLVED_ID

    def __post_init__(self):
        arr = np.ascontiguousarray(np.asarray(self.labels, dtype=np.uint8))
        if arr.ndim != 2:
            raise ValueError(f"labels must be 2D, got shape {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)
        if self.num_labels < 1:
            raise ValueError("num_labels must be >= 1")
        if self.num_labels > self.unresolved_id:
            raise ValueError(
                f"num_labels {self.num_labels} collides with unresolved id {self.unresolved_id}"
            )

    @classmethod
    def from_labels(cls, labels, region: Region | None = None) -> "BasinGrid":
        """Build a grid inferring num_labels as the highest real id + 1."""
        arr = np.asarray(labels, dtype=np.uint8)
        real = arr[arr != UNRESOLVED_ID]
        n = int(real.max()) + 1 if real.size else 1
        return cls(arr, n, region)

    @property
    def height(self) -> int:
        return self.labels.shape[0]

    @property
    def width(self) -> int:
        return self.labels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.labels.shape

    def label_values(self) -> np.ndarray:
        """Distinct pixel values present, including the unresolved id."""
        return np.unique(self.labels)

    def attractor_ids(self) -> np.ndarray:
        """Distinct real attractor ids present (unresolved excluded)."""
        vals = np.unique(self.labels)
        return vals[vals != self.unresolved_id]

    def unresolved_fraction(self) -> float:
        return float(np.count_nonzero(self.labels == self.unresolved_id) / self.labels.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BasinGrid):
            return NotImplemented
        return (
            self.labels.shape == other.labels.shape
            and bool(np.array_equal(self.labels, other.labels))
            and self.num_labels == other.num_labels
            and self.region == other.region
            and self.unresolved_id == other.unresolved_id
        )


def flip_horizontal(grid: BasinGrid) -> BasinGrid:
    """Reverse column order. Pure image-space operation; region is carried as is."""
    return BasinGrid(grid.labels[:, ::-1], grid.num_labels, grid.region, grid.unresolved_id)


def flip_vertical(grid: BasinGrid) -> BasinGrid:
    """Reverse row order."""
    return BasinGrid(grid.labels[::-1, :], grid.num_labels, grid.region, grid.unresolved_id)


def relabel(grid: BasinGrid, permutation: Sequence[int]) -> BasinGrid:
    """Apply a bijection on 0..num_labels-1 to every pixel.

    The unresolved id maps to itself. Ids outside the permuted range (possible
    after merges) are left unchanged.
    """
    perm = np.asarray(permutation, dtype=np.int64)
    n = grid.num_labels
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise InvalidPermutation(
            f"permutation must be a bijection on 0..{n - 1}, got {list(permutation)}"
        )
    table = np.arange(256, dtype=np.uint8)
    table[:n] = perm.astype(np.uint8)
    return BasinGrid(table[grid.labels], n, grid.region, grid.unresolved_id)
