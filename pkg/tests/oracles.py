"""Independent brute-force oracles for the Monte Carlo estimators.

These deliberately avoid the library's integral-image machinery: boxes are
enumerated one by one and inspected with plain numpy reductions.
"""

import numpy as np


def oracle_uncertain_fraction(grid, eps):
    """A box is uncertain iff it holds >= 2 distinct labels; all positions."""
    a = grid.labels
    h, w = a.shape
    hits = 0
    total = 0
    for r in range(h - eps + 1):
        for c in range(w - eps + 1):
            block = a[r:r + eps, c:c + eps]
            hits += int(np.unique(block).size >= 2)
            total += 1
    return hits / total


def oracle_mean_box_entropy(grid, box_size, boundary_only=False):
    """Mean -sum p ln p over every box position via per-box bincounts."""
    a = grid.labels
    h, w = a.shape
    values = []
    for r in range(h - box_size + 1):
        for c in range(w - box_size + 1):
            counts = np.bincount(a[r:r + box_size, c:c + box_size].ravel())
            counts = counts[counts > 0]
            if boundary_only and counts.size < 2:
                continue
            p = counts / counts.sum()
            values.append(float(-(p * np.log(p)).sum()))
    return float(np.mean(values))
