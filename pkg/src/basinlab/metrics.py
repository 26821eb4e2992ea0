"""Monte Carlo unpredictability metrics over basin grids.

Four characterizations: box-counting fractal dimension, basin entropy Sb,
boundary basin entropy Sbb (all Monte Carlo box sampling), and the Wada
merging test (in :mod:`basinlab.wada`).

Sampling conventions, fixed so results are reproducible:

* Boxes are axis-aligned squares fully inside the grid; the top-left corner
  is uniform over all admissible positions.
* Corners are drawn in batches from one PCG64 stream per estimator call: for
  each box size, all row coordinates first, then all column coordinates.
* Natural logarithm throughout; the unresolved id counts as an ordinary
  color.
* Per-box entropies sum their -p*ln(p) terms in ascending count order and
  estimator means are compensated sums (math.fsum), so exhaustive-mode
  results are exactly invariant under flips and label permutations and
  independent of how the sampling budget is partitioned.

Estimators are pure given (grid, config); a sampling budget may be cut into
contiguous chunks of the stream and reduced in any order without changing
the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    BoxTooLarge,
    DegenerateFit,
    InsufficientScaling,
    NoBoundaryDetected,
    NoBoundarySampled,
)
from .grid import BasinGrid
from .rng import make_rng

PHASE_PLANE_DIM = 2.0


@dataclass(frozen=True)
class FDimConfig:
    """Box sizes 3..33 step 3, 350000 boxes per size: the reference budget."""

    eps_min: int = 3
    eps_max: int = 33
    eps_step: int = 3
    boxes_per_size: int = 350_000
    seed: int = 0

    def __post_init__(self):
        if self.eps_min < 2:
            raise ValueError("eps_min must be >= 2")
        if self.eps_max < self.eps_min:
            raise ValueError("eps_max must be >= eps_min")
        if self.eps_step < 1 or self.boxes_per_size < 1:
            raise ValueError("eps_step and boxes_per_size must be >= 1")

    def sizes(self) -> list[int]:
        return list(range(self.eps_min, self.eps_max + 1, self.eps_step))


@dataclass(frozen=True)
class EntropyConfig:
    """350000 random boxes of side 15: the reference Sb/Sbb budget."""

    box_size: int = 15
    n_boxes: int = 350_000
    seed: int = 0

    def __post_init__(self):
        if self.box_size < 2:
            raise ValueError("box_size must be >= 2")
        if self.n_boxes < 1:
            raise ValueError("n_boxes must be >= 1")


@dataclass(frozen=True)
class WadaConfig:
    fattening_r: int = 5

    def __post_init__(self):
        if self.fattening_r < 0:
            raise ValueError("fattening_r must be >= 0")


@dataclass(frozen=True)
class MetricResult:
    mean: float
    std: float
    repeats: int
    samples: tuple[float, ...]


@dataclass(frozen=True)
class FitResult:
    slope: float
    intercept: float
    points_used: int


def boundary_mask(grid: BasinGrid) -> np.ndarray:
    """True where any 4-connected neighbor carries a different label."""
    a = grid.labels
    mask = np.zeros(a.shape, dtype=bool)
    horiz = a[:, :-1] != a[:, 1:]
    mask[:, :-1] |= horiz
    mask[:, 1:] |= horiz
    vert = a[:-1, :] != a[1:, :]
    mask[:-1, :] |= vert
    mask[1:, :] |= vert
    return mask


class _BoxCounter:
    """Per-label integral images: O(1) label counts for any box position."""

    def __init__(self, grid: BasinGrid):
        labels = grid.labels
        self.shape = labels.shape
        self.values = np.unique(labels)
        h, w = labels.shape
        self.integrals = np.zeros((self.values.size, h + 1, w + 1), dtype=np.int64)
        for k, v in enumerate(self.values):
            np.cumsum(labels == v, axis=0, out=self.integrals[k, 1:, 1:])
            np.cumsum(self.integrals[k, 1:, 1:], axis=1, out=self.integrals[k, 1:, 1:])

    def counts(self, rows: np.ndarray, cols: np.ndarray, size: int) -> np.ndarray:
        """(n, n_values) pixel counts of each label value per box."""
        s = self.integrals
        c = (
            s[:, rows + size, cols + size]
            - s[:, rows, cols + size]
            - s[:, rows + size, cols]
            + s[:, rows, cols]
        )
        return c.T

    def counts_all(self, size: int) -> np.ndarray:
        """(positions, n_values) counts for every admissible corner, row-major."""
        h, w = self.shape
        rows = np.repeat(np.arange(h - size + 1), w - size + 1)
        cols = np.tile(np.arange(w - size + 1), h - size + 1)
        return self.counts(rows, cols, size)




def _check_box_fits(box_size: int, shape: tuple[int, int]):
    if box_size > shape[0] or box_size > shape[1]:
        raise BoxTooLarge(f"box of side {box_size} does not fit in grid {shape}")


def _sample_corners(rng: np.random.Generator, box_size: int, shape: tuple[int, int],
                    n: int) -> tuple[np.ndarray, np.ndarray]:
    rows = rng.integers(0, shape[0] - box_size + 1, size=n)
    cols = rng.integers(0, shape[1] - box_size + 1, size=n)
    return rows, cols


def sample_box(rng: np.random.Generator, box_size: int,
               shape: tuple[int, int]) -> tuple[int, int]:
    """Uniform top-left corner of a box kept fully inside the grid."""
    _check_box_fits(box_size, shape)
    rows, cols = _sample_corners(rng, box_size, shape, 1)
    return int(rows[0]), int(cols[0])


def _entropies_from_counts(counts: np.ndarray, area: float) -> np.ndarray:
    """Per-box -sum p ln p, terms added in ascending count order."""
    ordered = np.sort(counts, axis=1)
    p = ordered / area
    terms = np.where(p > 0, -p * np.log(np.where(p > 0, p, 1.0)), 0.0)
    return np.sum(terms, axis=1)


def box_entropy(grid: BasinGrid, corner: tuple[int, int], box_size: int) -> float:
    """Gibbs entropy of the label proportions inside one box."""
    _check_box_fits(box_size, grid.shape)
    r, c = corner
    if not (0 <= r <= grid.height - box_size and 0 <= c <= grid.width - box_size):
        raise ValueError(f"corner {corner} places the box outside the grid")
    block = grid.labels[r:r + box_size, c:c + box_size]
    counts = np.bincount(block.ravel(), minlength=0)
    counts = np.sort(counts[counts > 0])
    p = counts / float(box_size * box_size)
    return float(np.sum(-p * np.log(p)))


def uncertain_fractions(grid: BasinGrid, cfg: FDimConfig) -> list[tuple[int, float]]:
    """Monte Carlo fraction of boxes holding >= 2 distinct labels, per size."""
    _check_box_fits(cfg.eps_max, grid.shape)
    counter = _BoxCounter(grid)
    rng = make_rng(cfg.seed)
    out = []
    for eps in cfg.sizes():
        rows, cols = _sample_corners(rng, eps, grid.shape, cfg.boxes_per_size)
        distinct = np.count_nonzero(counter.counts(rows, cols, eps), axis=1)
        hits = int(np.count_nonzero(distinct >= 2))
        out.append((eps, hits / cfg.boxes_per_size))
    return out


def uncertain_fractions_exact(grid: BasinGrid,
                              sizes: Sequence[int]) -> list[tuple[int, float]]:
    """Exhaustive all-positions uncertain fraction, per box size."""
    counter = _BoxCounter(grid)
    out = []
    for eps in sizes:
        _check_box_fits(eps, grid.shape)
        counts = counter.counts_all(eps)
        distinct = np.count_nonzero(counts, axis=1)
        out.append((eps, int(np.count_nonzero(distinct >= 2)) / distinct.size))
    return out


def _fdim_from_fractions(fractions: Iterable[tuple[int, float]]) -> float:
    # Abscissa log(eps - 1): two distinct labels inside an eps-pixel box are
    # at most eps - 1 center-to-center units apart, so that is the geometric
    # scale the uncertainty test probes. A straight boundary straddles
    # exactly eps - 1 corner offsets, making log f linear in log(eps - 1)
    # with slope 1; fitting log eps instead would bend the small-eps end and
    # bias a line's dimension down to ~0.82 on the 3..33 ladder.
    nonzero = [(e, f) for e, f in fractions if f > 0]
    if not nonzero:
        raise NoBoundaryDetected("no uncertain box at any size")
    if len(nonzero) < 2:
        raise InsufficientScaling("need >= 2 sizes with nonzero uncertain fraction")
    pts = [(math.log(e - 1), math.log(f)) for e, f in nonzero]
    fit = linear_fit(pts)
    return PHASE_PLANE_DIM - fit.slope


def fractal_dimension(grid: BasinGrid, cfg: FDimConfig) -> float:
    """Monte Carlo box-counting dimension of the basin boundary.

    An uncertain box holds pixels of at least two basins (the unresolved id
    counts as a color). The uncertain fraction f scales as the boundary is
    refined; the estimate is D minus the least squares slope of log f
    against log of the box span, D = 2 for the phase plane.
    """
    if grid.label_values().size < 2:
        raise NoBoundaryDetected("grid carries a single label")
    return _fdim_from_fractions(uncertain_fractions(grid, cfg))


def fractal_dimension_exhaustive(grid: BasinGrid, cfg: FDimConfig) -> float:
    """Same fit as :func:`fractal_dimension` on exhaustive fractions."""
    if grid.label_values().size < 2:
        raise NoBoundaryDetected("grid carries a single label")
    return _fdim_from_fractions(uncertain_fractions_exact(grid, cfg.sizes()))


def box_entropy_samples(grid: BasinGrid, cfg: EntropyConfig) -> np.ndarray:
    """Entropies of cfg.n_boxes randomly placed boxes (the Sb/Sbb sample)."""
    _check_box_fits(cfg.box_size, grid.shape)
    counter = _BoxCounter(grid)
    rng = make_rng(cfg.seed)
    rows, cols = _sample_corners(rng, cfg.box_size, grid.shape, cfg.n_boxes)
    counts = counter.counts(rows, cols, cfg.box_size)
    return _entropies_from_counts(counts, float(cfg.box_size * cfg.box_size))


def basin_entropy(grid: BasinGrid, cfg: EntropyConfig) -> float:
    """Mean box entropy over the sampled boxes; 0 for a uniform grid."""
    samples = box_entropy_samples(grid, cfg)
    return math.fsum(samples) / samples.size


def basin_entropy_exact(grid: BasinGrid, box_size: int) -> float:
    """Mean box entropy over every admissible box position."""
    _check_box_fits(box_size, grid.shape)
    counter = _BoxCounter(grid)
    counts = counter.counts_all(box_size)
    ent = _entropies_from_counts(counts, float(box_size * box_size))
    return math.fsum(ent) / ent.size


def boundary_basin_entropy(grid: BasinGrid, cfg: EntropyConfig) -> float:
    """Mean entropy over sampled boxes that contain >= 2 labels.

    Uses the identical box stream as :func:`basin_entropy` for the same
    seed, hence Sbb >= Sb whenever both are computed with one config.
    """
    _check_box_fits(cfg.box_size, grid.shape)
    counter = _BoxCounter(grid)
    rng = make_rng(cfg.seed)
    rows, cols = _sample_corners(rng, cfg.box_size, grid.shape, cfg.n_boxes)
    counts = counter.counts(rows, cols, cfg.box_size)
    multi = np.count_nonzero(counts, axis=1) >= 2
    if not multi.any():
        raise NoBoundarySampled(f"no multi-label box among {cfg.n_boxes} samples")
    ent = _entropies_from_counts(counts[multi], float(cfg.box_size * cfg.box_size))
    return math.fsum(ent) / ent.size


def boundary_basin_entropy_exact(grid: BasinGrid, box_size: int) -> float:
    _check_box_fits(box_size, grid.shape)
    counter = _BoxCounter(grid)
    counts = counter.counts_all(box_size)
    multi = np.count_nonzero(counts, axis=1) >= 2
    if not multi.any():
        raise NoBoundarySampled("no box position contains more than one label")
    ent = _entropies_from_counts(counts[multi], float(box_size * box_size))
    return math.fsum(ent) / ent.size


def linear_fit(points: Iterable[tuple[float, float]]) -> FitResult:
    """Ordinary least squares line through (x, y) pairs."""
    pts = list(points)
    if len(pts) < 2:
        raise DegenerateFit("need at least two points")
    x = np.array([p[0] for p in pts], dtype=np.float64)
    y = np.array([p[1] for p in pts], dtype=np.float64)
    dx = x - x.mean()
    denom = float(np.dot(dx, dx))
    if denom == 0.0:
        raise DegenerateFit("x values are all identical")
    slope = float(np.dot(dx, y - y.mean()) / denom)
    intercept = float(y.mean() - slope * x.mean())
    return FitResult(slope=slope, intercept=intercept, points_used=len(pts))


def repeat_metric(
    estimator: Callable[[BasinGrid, object], float],
    grid: BasinGrid,
    cfg,
    repeats: int = 10,
    base_seed: int = 0,
) -> MetricResult:
    """Run a Monte Carlo estimator with seeds base_seed..base_seed+repeats-1.

    The reported value of a metric is the mean of the repeats; the sample
    standard deviation tracks the Monte Carlo spread. Any repeat error
    propagates.
    """
    if repeats < 1:
        raise ValueError("repeats must be >= 1")
    samples = tuple(
        float(estimator(grid, replace(cfg, seed=base_seed + k))) for k in range(repeats)
    )
    mean = float(np.mean(samples))
    std = float(np.std(samples, ddof=1)) if repeats > 1 else 0.0
    return MetricResult(mean=mean, std=std, repeats=repeats, samples=samples)
