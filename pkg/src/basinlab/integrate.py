"""Fixed-step classical 4th order Runge-Kutta.

Fixed steps (rather than adaptive RK45) keep basin generation bit-for-bit
deterministic for a given configuration, independent of how pixels are
batched. Derivative callables take ``(state, t)`` and must broadcast over a
leading batch axis, so one call advances every pending trajectory of a grid.
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import NumericalBlowup

DerivativeFn = Callable[[np.ndarray, float], np.ndarray]


def rk4_step(state, t: float, dt: float, derivative: DerivativeFn) -> np.ndarray:
    """One RK4 update of ``state`` at time ``t``.

    Raises NumericalBlowup if the update produces a non-finite component.
    Batched integrators use :func:`rk4_step_raw` and handle blowups per pixel.
    """
    out = rk4_step_raw(np.asarray(state, dtype=np.float64), t, dt, derivative)
    if not np.all(np.isfinite(out)):
        raise NumericalBlowup(f"non-finite state after step at t={t}")
    return out


def rk4_step_raw(state: np.ndarray, t: float, dt: float, derivative: DerivativeFn) -> np.ndarray:
    k1 = derivative(state, t)
    k2 = derivative(state + (0.5 * dt) * k1, t + 0.5 * dt)
    k3 = derivative(state + (0.5 * dt) * k2, t + 0.5 * dt)
    k4 = derivative(state + dt * k3, t + dt)
    return state + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
