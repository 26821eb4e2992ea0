import numpy as np
import pytest

from basinlab.errors import NumericalBlowup
from basinlab.integrate import rk4_step

# Truncated Taylor series of e^0.1: the exact RK4 step for x' = x.
RK4_EXP_STEP = 1.0 + 0.1 + 0.1**2 / 2 + 0.1**3 / 6 + 0.1**4 / 24


def test_zero_field_leaves_state():
    out = rk4_step(np.array([1.0, -2.0]), 0.0, 0.5, lambda s, t: np.zeros_like(s))
    assert np.array_equal(out, [1.0, -2.0])


def test_exponential_step_matches_taylor():
    out = rk4_step(np.array([1.0]), 0.0, 0.1, lambda s, t: s)
    assert out[0] == pytest.approx(RK4_EXP_STEP, abs=1e-15)
    assert abs(out[0] - np.exp(0.1)) < 1e-7  # local error O(dt^5)


def test_harmonic_oscillator_energy_drift():
    # x'' = -x from (1, 0): energy (x^2 + v^2)/2 conserved to 1e-6 relative
    # over 1e4 steps at dt = 0.01; closed form is (cos t, -sin t).
    def deriv(s, t):
        return np.stack([s[..., 1], -s[..., 0]], axis=-1)

    state = np.array([1.0, 0.0])
    dt = 0.01
    for k in range(10_000):
        state = rk4_step(state, k * dt, dt, deriv)
    energy = 0.5 * (state[0] ** 2 + state[1] ** 2)
    assert abs(energy - 0.5) / 0.5 < 1e-6
    t_end = 10_000 * dt
    assert state[0] == pytest.approx(np.cos(t_end), abs=1e-5)
    assert state[1] == pytest.approx(-np.sin(t_end), abs=1e-5)


def test_batched_step_matches_scalar():
    def deriv(s, t):
        return -0.5 * s

    batch = np.array([[1.0, 2.0], [3.0, 4.0]])
    out = rk4_step(batch, 0.0, 0.2, deriv)
    for row_in, row_out in zip(batch, out):
        assert np.array_equal(rk4_step(row_in, 0.0, 0.2, deriv), row_out)


def test_blowup_raises():
    with np.errstate(over="ignore"), pytest.raises(NumericalBlowup):
        rk4_step(np.array([1e200]), 0.0, 1.0, lambda s, t: s * s)
