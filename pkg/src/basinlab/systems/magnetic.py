"""Magnetic pendulum over n magnets on a circle.

    x'' + b x' + 0.2 x = sum_i (x_i - x) / ((x_i - x)^2 + (y_i - y)^2 + 0.2^2)^(3/2)

and the analogous equation for y. The 0.2^2 term in the denominator is the
pendulum height above the magnet plane and already softens the 1/r^3 force,
so no extra regularization is applied. Magnets sit equally spaced on a circle
of radius ``magnet_radius``, magnet 0 at angle 0.

A trajectory is labeled with a magnet index once its speed stays below
``stop_speed`` while its position stays within ``match_tol`` of that magnet
for a full dwell window; with b <= 0 this may never happen and the pixel ends
unresolved.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..grid import UNRESOLVED_ID, Region
from ..integrate import rk4_step_raw
from .config import IntegratorConfig

SPRING = 0.2
HEIGHT_SQ = 0.2 * 0.2
DEFAULT_DT = 0.01


@dataclass(frozen=True)
class MagneticPendulumParams:
    damping: float
    magnet_radius: float
    n_magnets: int = 3

    name = "magnetic"
    sweep_ranges = {"damping": (-0.01, 0.25), "magnet_radius": (1.5, 3.0)}

    def __post_init__(self):
        if self.n_magnets not in (2, 3, 4):
            raise ValueError("n_magnets must be 2, 3 or 4")
        if self.magnet_radius <= 0:
            raise ValueError("magnet_radius must be positive")

    def magnet_positions(self) -> np.ndarray:
        angles = 2.0 * np.pi * np.arange(self.n_magnets) / self.n_magnets
        return self.magnet_radius * np.stack([np.cos(angles), np.sin(angles)], axis=-1)

    def derivative(self, state: np.ndarray, t: float) -> np.ndarray:
        x = state[..., 0]
        y = state[..., 1]
        vx = state[..., 2]
        vy = state[..., 3]
        ax = -self.damping * vx - SPRING * x
        ay = -self.damping * vy - SPRING * y
        for mx, my in self.magnet_positions():
            dx = mx - x
            dy = my - y
            inv = (dx * dx + dy * dy + HEIGHT_SQ) ** -1.5
            ax = ax + dx * inv
            ay = ay + dy * inv
        return np.stack([vx, vy, ax, ay], axis=-1)

    def param_dict(self) -> dict:
        return {
            "damping": self.damping,
            "magnet_radius": self.magnet_radius,
            "n_magnets": self.n_magnets,
        }


def _classify_batch(params: MagneticPendulumParams, states0: np.ndarray,
                    config: IntegratorConfig) -> np.ndarray:
    n = states0.shape[0]
    labels = np.full(n, UNRESOLVED_ID, dtype=np.int64)
    dt = config.dt if config.dt is not None else DEFAULT_DT
    n_steps = int(config.t_max / dt)
    dwell_steps = max(1, int(round(config.dwell_time / dt)))
    magnets = params.magnet_positions()
    tol2 = config.match_tol * config.match_tol
    stop2 = config.stop_speed * config.stop_speed

    states = np.array(states0, dtype=np.float64)
    idx = np.arange(n)
    dwell = np.zeros(n, dtype=np.int64)
    candidate = np.full(n, -1, dtype=np.int64)

    step = 0
    while idx.size and step < n_steps:
        states = rk4_step_raw(states, step * dt, dt, params.derivative)
        step += 1

        speed2 = states[:, 2] ** 2 + states[:, 3] ** 2
        d2 = np.full(idx.size, np.inf)
        nearest = np.zeros(idx.size, dtype=np.int64)
        for m_i, (mx, my) in enumerate(magnets):
            dm = (states[:, 0] - mx) ** 2 + (states[:, 1] - my) ** 2
            closer = dm < d2
            d2 = np.where(closer, dm, d2)
            nearest = np.where(closer, m_i, nearest)

        settled = (speed2 < stop2) & (d2 < tol2)
        same = settled & (candidate[idx] == nearest)
        dwell[idx] = np.where(same, dwell[idx] + 1, np.where(settled, 1, 0))
        candidate[idx] = np.where(settled, nearest, -1)

        done = dwell[idx] >= dwell_steps
        bad = ~np.isfinite(states).all(axis=1)
        if done.any():
            labels[idx[done]] = candidate[idx[done]]
        drop = done | bad
        if drop.any():
            keep = ~drop
            idx, states = idx[keep], states[keep]
    return labels


def classify_magnetic(state0, params: MagneticPendulumParams,
                      config: IntegratorConfig | None = None) -> int:
    """Label of one initial state (x, y, vx, vy): index of the capturing magnet."""
    cfg = config or IntegratorConfig()
    return int(_classify_batch(params, np.asarray(state0, dtype=np.float64)[None, :], cfg)[0])


def compute_magnetic_basin(params: MagneticPendulumParams, region: Region,
                           config: IntegratorConfig) -> np.ndarray:
    """Basin over initial rest positions (x, y, 0, 0)."""
    xs = region.x_centers()
    ys = region.y_centers()
    gx, gy = np.meshgrid(xs, ys)
    states = np.stack(
        [gx.ravel(), gy.ravel(), np.zeros(gx.size), np.zeros(gx.size)], axis=-1
    )
    labels = _classify_batch(params, states, config)
    return labels.reshape(region.resolution, region.resolution)
