"""Catalog of discovered attractor signatures.

A signature is a finite point cloud in phase space: the stroboscopic samples
of a driven attractor, a fixed-point location, or a polynomial root. The
entry index IS the label id written into basin grids, so callers fill the
registry in a deterministic order (row-major first discovery for driven
systems, precomputed root/magnet/exit order elsewhere).

Matching is containment: a candidate point set matches an entry when every
candidate point lies within ``match_tol`` (Euclidean) of some entry point.
Chaotic attractors are only finitely sampled, so entries may grow: `absorb`
adds freshly observed points to a cloud, deduplicated on a half-tolerance
lattice to keep clouds compact. Selected axes can be compared modulo 2*pi
(pendulum angles); wrapped axes get ghost copies near the seam so KD-tree
lookups see the periodicity.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

TWO_PI = 2.0 * np.pi
ENTRY_POINT_CAP = 20_000


class AttractorRegistry:
    def __init__(self, match_tol: float, wrap_axes: tuple[int, ...] = ()):
        if match_tol <= 0:
            raise ValueError("match_tol must be positive")
        self.match_tol = float(match_tol)
        self.wrap_axes = tuple(wrap_axes)
        self._points: list[np.ndarray] = []
        self._keys: list[set] = []
        self._trees: list[cKDTree] = []

    def __len__(self) -> int:
        return len(self._points)

    @property
    def entries(self) -> list[np.ndarray]:
        return [pts.copy() for pts in self._points]

    def signature(self, label: int) -> np.ndarray:
        return self._points[label].copy()

    def wrap(self, points: np.ndarray) -> np.ndarray:
        """Wrap periodic axes into [-pi, pi); returns a copy."""
        out = np.array(points, dtype=np.float64, copy=True)
        for ax in self.wrap_axes:
            out[..., ax] = (out[..., ax] + np.pi) % TWO_PI - np.pi
        return out

    def _dedup_keys(self, points: np.ndarray) -> list[tuple]:
        quantized = np.round(points / (0.5 * self.match_tol)).astype(np.int64)
        return [tuple(row) for row in quantized]

    def _ghosted(self, points: np.ndarray) -> np.ndarray:
        out = points
        for ax in self.wrap_axes:
            margin = 2.0 * self.match_tol
            high = out[out[:, ax] > np.pi - margin].copy()
            high[:, ax] -= TWO_PI
            low = out[out[:, ax] < -np.pi + margin].copy()
            low[:, ax] += TWO_PI
            out = np.concatenate([out, high, low], axis=0)
        return out

    def _rebuild(self, label: int) -> None:
        self._trees[label] = cKDTree(self._ghosted(self._points[label]))

    def register(self, points: np.ndarray) -> int:
        """Append a new attractor signature; returns its id."""
        pts = self.wrap(np.atleast_2d(np.asarray(points, dtype=np.float64)))
        keys = self._dedup_keys(pts)
        seen: set = set()
        keep = []
        for i, key in enumerate(keys):
            if key not in seen:
                seen.add(key)
                keep.append(i)
        self._points.append(pts[keep])
        self._keys.append(seen)
        self._trees.append(None)  # type: ignore[arg-type]
        self._rebuild(len(self._points) - 1)
        return len(self._points) - 1

    def absorb(self, label: int, points: np.ndarray) -> None:
        """Grow an entry with newly observed points of the same attractor."""
        if len(self._points[label]) >= ENTRY_POINT_CAP:
            return
        pts = self.wrap(np.atleast_2d(np.asarray(points, dtype=np.float64)))
        keys = self._dedup_keys(pts)
        fresh = []
        seen = self._keys[label]
        for i, key in enumerate(keys):
            if key not in seen:
                seen.add(key)
                fresh.append(i)
        if fresh:
            self._points[label] = np.concatenate([self._points[label], pts[fresh]], axis=0)
            self._rebuild(label)

    def within(self, label: int, points: np.ndarray) -> np.ndarray:
        """Per-point: lies within match_tol of the entry cloud. Points pre-wrapped."""
        dist, _ = self._trees[label].query(
            points, k=1, distance_upper_bound=self.match_tol * (1.0 + 1e-12)
        )
        return dist <= self.match_tol

    def match(self, points: np.ndarray) -> int | None:
        """First entry (lowest id) whose cloud contains every candidate point."""
        pts = self.wrap(np.atleast_2d(np.asarray(points, dtype=np.float64)))
        for label in range(len(self._points)):
            if bool(self.within(label, pts).all()):
                return label
        return None

    def match_batch(self, candidates: np.ndarray) -> np.ndarray:
        """(M,) first-matching ids for a (M, k, d) stack, -1 where none match."""
        m, k, d = candidates.shape
        out = np.full(m, -1, dtype=np.int64)
        if m == 0:
            return out
        flat = self.wrap(candidates.reshape(m * k, d))
        pending = np.arange(m)
        for label in range(len(self._points)):
            if pending.size == 0:
                break
            sel = (pending[:, None] * k + np.arange(k)[None, :]).reshape(-1)
            hit = self.within(label, flat[sel]).reshape(pending.size, k).all(axis=1)
            out[pending[hit]] = label
            pending = pending[~hit]
        return out
