"""Henon-Heiles open Hamiltonian: exit basins replace basins of attraction.

    H = (px^2 + py^2)/2 + (x^2 + y^2)/2 + x^2 y - y^3/3

Above the saddle energy 1/6 the equipotential opens three escape channels at
90, 210 and 330 degrees. A trajectory is classified by which 120-degree
sector it is in when its radius first exceeds the escape radius; the crossing
point is linearly interpolated between the bracketing steps. Launch momenta
come from tangential shooting: |p| fixed by energy conservation, direction
perpendicular to the position vector, counterclockwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ForbiddenRegion, UndefinedTangent
from ..grid import UNRESOLVED_ID, Region
from ..integrate import rk4_step_raw
from .config import IntegratorConfig

SADDLE_ENERGY = 1.0 / 6.0
DEFAULT_DT = 0.005
EXIT_ANGLES_DEG = (90.0, 210.0, 330.0)


@dataclass(frozen=True)
class HenonHeilesParams:
    energy: float

    name = "henon_heiles"
    sweep_ranges = {"energy": (0.5, 2.0)}

    def __post_init__(self):
        if self.energy <= SADDLE_ENERGY:
            raise ValueError(f"energy must exceed the saddle energy {SADDLE_ENERGY:.6f}")

    def param_dict(self) -> dict:
        return {"energy": self.energy}


def potential(x, y):
    return 0.5 * (x * x + y * y) + x * x * y - y * y * y / 3.0


def hamiltonian(state: np.ndarray) -> np.ndarray:
    x, y, px, py = (state[..., i] for i in range(4))
    return 0.5 * (px * px + py * py) + potential(x, y)


def derivative(state: np.ndarray, t: float) -> np.ndarray:
    x = state[..., 0]
    y = state[..., 1]
    px = state[..., 2]
    py = state[..., 3]
    ax = -x - 2.0 * x * y
    ay = -y - x * x + y * y
    return np.stack([px, py, ax, ay], axis=-1)


def hh_initial_state(x: float, y: float, energy: float) -> np.ndarray:
    """Tangential-shooting launch state (x, y, px, py) with H exactly energy."""
    r2 = x * x + y * y
    if r2 == 0.0:
        raise UndefinedTangent("tangential direction is undefined at the origin")
    v = potential(x, y)
    if v >= energy:
        raise ForbiddenRegion(f"V({x}, {y}) = {v:.6f} >= E = {energy:.6f}")
    p = np.sqrt(2.0 * (energy - v))
    r = np.sqrt(r2)
    return np.array([x, y, -y / r * p, x / r * p])


def exit_label(x, y):
    """Escape sector: 0 around 90 deg, 1 around 210 deg, 2 around 330 deg."""
    deg = np.degrees(np.arctan2(y, x)) % 360.0
    return (((deg - 30.0) % 360.0) // 120.0).astype(np.int64)


def _classify_batch(states0: np.ndarray, config: IntegratorConfig) -> np.ndarray:
    """(N,) exit labels for a (N, 4) batch; bounded orbits end unresolved."""
    n = states0.shape[0]
    labels = np.full(n, UNRESOLVED_ID, dtype=np.int64)
    dt = config.dt if config.dt is not None else DEFAULT_DT
    r_escape = config.escape_radius
    n_steps = int(config.t_max / dt)

    states = np.array(states0, dtype=np.float64)
    idx = np.arange(n)

    r = np.hypot(states[:, 0], states[:, 1])
    out = r > r_escape
    if out.any():
        labels[idx[out]] = exit_label(states[out, 0], states[out, 1])
        idx, states = idx[~out], states[~out]

    step = 0
    while idx.size and step < n_steps:
        new = rk4_step_raw(states, step * dt, dt, derivative)
        step += 1
        r_new = np.hypot(new[:, 0], new[:, 1])
        bad = ~np.isfinite(r_new)
        escaped = (r_new > r_escape) & ~bad
        if escaped.any():
            r_old = np.hypot(states[escaped, 0], states[escaped, 1])
            frac = (r_escape - r_old) / (r_new[escaped] - r_old)
            frac = np.clip(frac, 0.0, 1.0)
            cx = states[escaped, 0] + frac * (new[escaped, 0] - states[escaped, 0])
            cy = states[escaped, 1] + frac * (new[escaped, 1] - states[escaped, 1])
            labels[idx[escaped]] = exit_label(cx, cy)
        drop = escaped | bad
        if drop.any():
            keep = ~drop
            idx, new = idx[keep], new[keep]
        states = new
    return labels


def classify_escape(state0, config: IntegratorConfig | None = None) -> int:
    cfg = config or IntegratorConfig()
    return int(_classify_batch(np.asarray(state0, dtype=np.float64)[None, :], cfg)[0])


def compute_hh_basin(params: HenonHeilesParams, region: Region, config: IntegratorConfig):
    """Exit basin over launch positions (x, y); forbidden pixels stay unresolved."""
    xs = region.x_centers()
    ys = region.y_centers()
    gx, gy = np.meshgrid(xs, ys)
    x = gx.ravel()
    y = gy.ravel()
    v = potential(x, y)
    r2 = x * x + y * y
    allowed = (v < params.energy) & (r2 > 0)

    labels = np.full(x.size, UNRESOLVED_ID, dtype=np.int64)
    if allowed.any():
        p = np.sqrt(2.0 * (params.energy - v[allowed]))
        r = np.sqrt(r2[allowed])
        states = np.stack(
            [x[allowed], y[allowed], -y[allowed] / r * p, x[allowed] / r * p], axis=-1
        )
        labels[allowed] = _classify_batch(states, config)
    return labels.reshape(region.resolution, region.resolution)
