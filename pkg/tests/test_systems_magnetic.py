import numpy as np
import pytest

from basinlab import MagneticPendulumParams, Region, UNRESOLVED_ID, classify_magnetic, compute_basin
from basinlab.systems import IntegratorConfig


def test_magnet_positions_on_circle():
    params = MagneticPendulumParams(damping=0.2, magnet_radius=2.0, n_magnets=4)
    pos = params.magnet_positions()
    assert pos.shape == (4, 2)
    assert np.allclose(np.hypot(pos[:, 0], pos[:, 1]), 2.0)
    assert np.allclose(pos[0], [2.0, 0.0])


@pytest.mark.parametrize("magnet", [0, 1, 2])
def test_start_at_magnet_labels_that_magnet(magnet):
    params = MagneticPendulumParams(damping=0.2, magnet_radius=2.0, n_magnets=3)
    mx, my = params.magnet_positions()[magnet]
    assert classify_magnetic((mx, my, 0.0, 0.0), params) == magnet


def test_bisector_start_runs_without_error():
    # n=2: the perpendicular bisector of the two magnets is a symmetry line;
    # the trajectory may settle either way or not at all, but must classify
    # into the allowed set.
    params = MagneticPendulumParams(damping=0.2, magnet_radius=2.0, n_magnets=2)
    cfg = IntegratorConfig(t_max=500.0)
    label = classify_magnetic((0.0, 1.0, 0.0, 0.0), params, cfg)
    assert label in (0, 1, UNRESOLVED_ID)


def test_refined_step_oracle_agrees():
    params = MagneticPendulumParams(damping=0.2, magnet_radius=2.0, n_magnets=4)
    coarse = classify_magnetic((0.5, 0.5, 0.0, 0.0), params, IntegratorConfig(t_max=2000.0))
    fine = classify_magnetic(
        (0.5, 0.5, 0.0, 0.0), params, IntegratorConfig(dt=0.001, t_max=2000.0)
    )
    assert coarse != UNRESOLVED_ID
    assert coarse == fine


def test_negative_damping_gives_unresolved():
    params = MagneticPendulumParams(damping=-0.01, magnet_radius=2.0, n_magnets=3)
    cfg = IntegratorConfig(t_max=100.0)
    assert classify_magnetic((0.4, 0.3, 0.0, 0.0), params, cfg) == UNRESOLVED_ID


def test_small_basin_grid_deterministic():
    params = MagneticPendulumParams(damping=0.2, magnet_radius=2.0, n_magnets=3)
    region = Region(-2.5, 2.5, -2.5, 2.5, 12)
    cfg = IntegratorConfig(t_max=500.0)
    a = compute_basin(params, region, cfg)
    b = compute_basin(params, region, cfg)
    assert a == b
    assert set(np.unique(a.labels)) <= {0, 1, 2, UNRESOLVED_ID}


def test_params_validation():
    with pytest.raises(ValueError):
        MagneticPendulumParams(damping=0.1, magnet_radius=2.0, n_magnets=5)
    with pytest.raises(ValueError):
        MagneticPendulumParams(damping=0.1, magnet_radius=-1.0, n_magnets=3)
