"""Forced damped pendulum.

    theta'' + 0.2 theta' + sin(theta) = forcing * sin(omega * t)

State vector is (theta, theta'). The angle is treated as periodic: registry
distances wrap theta differences into (-pi, pi], so rotating attractors whose
stroboscopic angle advances by multiples of 2*pi still match themselves.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DAMPING = 0.2


@dataclass(frozen=True)
class PendulumParams:
    forcing: float
    omega: float

    name = "pendulum"
    sweep_ranges = {"forcing": (0.5, 2.0), "omega": (0.5, 2.0)}

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        if self.forcing < 0:
            raise ValueError("forcing must be non-negative")

    @property
    def forcing_period(self) -> float:
        return 2.0 * np.pi / self.omega

    def derivative(self, state: np.ndarray, t: float) -> np.ndarray:
        theta = state[..., 0]
        v = state[..., 1]
        return np.stack([v, self.acceleration(theta, v, t)], axis=-1)

    def acceleration(self, theta, v, t: float):
        return self.forcing * np.sin(self.omega * t) - DAMPING * v - np.sin(theta)

    def param_dict(self) -> dict:
        return {"forcing": self.forcing, "omega": self.omega}
