"""Basin computation: one labeled trajectory per grid pixel.

Pixel (i, j) launches from the cell center (x_min + (j+1/2) dx,
y_min + (i+1/2) dy). Generation is fully deterministic for a given
(system, region, config, seed); the integrators themselves are
deterministic, the seed is accepted for interface stability and reserved
for future stochastic perturbations.
"""

from __future__ import annotations

import numpy as np

from .grid import BasinGrid, Region
from .systems import (
    DuffingParams,
    HenonHeilesParams,
    IntegratorConfig,
    MagneticPendulumParams,
    NewtonParams,
    PendulumParams,
    SystemSpec,
)
from .systems.driven import compute_driven_basin
from .systems.henon_heiles import compute_hh_basin
from .systems.magnetic import compute_magnetic_basin
from .systems.newton import compute_newton_basin


def compute_basin(
    system: SystemSpec,
    region: Region,
    config: IntegratorConfig | None = None,
    seed: int = 0,
) -> BasinGrid:
    """Integrate one trajectory per pixel and label its asymptotic fate.

    Per-pixel failures (blowups, never-classified trajectories, forbidden
    launch points) degrade to the unresolved id; they never abort the grid.
    """
    cfg = config or IntegratorConfig()
    if isinstance(system, (DuffingParams, PendulumParams)):
        labels, _ = compute_driven_basin(system, region, cfg)
    elif isinstance(system, NewtonParams):
        labels, _ = compute_newton_basin(system, region, cfg)
    elif isinstance(system, HenonHeilesParams):
        labels = compute_hh_basin(system, region, cfg)
    elif isinstance(system, MagneticPendulumParams):
        labels = compute_magnetic_basin(system, region, cfg)
    else:
        raise TypeError(f"not a system spec: {system!r}")
    return BasinGrid.from_labels(np.asarray(labels), region)
