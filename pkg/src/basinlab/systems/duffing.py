"""Periodically forced Duffing oscillator in the symmetric double well.

    x'' + 0.15 x' - x + x^3 = gamma * cos(omega * t)

State vector is (x, x'). Basins are computed over the (x, x') phase plane,
strobed once per forcing period.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DAMPING = 0.15


@dataclass(frozen=True)
class DuffingParams:
    gamma: float
    omega: float

    name = "duffing"
    sweep_ranges = {"gamma": (0.1, 0.5), "omega": (0.2, 2.5)}

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.gamma < 0:
            raise ValueError("gamma must be non-negative")

    @property
    def forcing_period(self) -> float:
        return 2.0 * np.pi / self.omega

    def derivative(self, state: np.ndarray, t: float) -> np.ndarray:
        x = state[..., 0]
        v = state[..., 1]
        return np.stack([v, self.acceleration(x, v, t)], axis=-1)

    def acceleration(self, x, v, t: float):
        return self.gamma * np.cos(self.omega * t) - DAMPING * v + x - x * x * x

    def param_dict(self) -> dict:
        return {"gamma": self.gamma, "omega": self.omega}
