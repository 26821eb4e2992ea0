import numpy as np
import pytest

import basinlab as bl
from basinlab.systems import IntegratorConfig


@pytest.fixture(scope="session")
def newton_cubic_333():
    """Cubic Newton basin z^3 - 1, b = 1, the canonical Wada fixture."""
    return bl.compute_basin(
        bl.NewtonParams(coeffs=(-1.0, 0.0, 0.0, 1.0)),
        bl.Region(-2.5, 2.5, -2.5, 2.5, 333),
    )


@pytest.fixture(scope="session")
def duffing_100():
    """Duffing gamma=0.3 omega=1.0 smoke basin at default budgets."""
    return bl.compute_basin(
        bl.DuffingParams(gamma=0.3, omega=1.0), bl.Region(-2.0, 2.0, -2.0, 2.0, 100)
    )


@pytest.fixture(scope="session")
def hh_smoke_50():
    """Henon-Heiles E=0.25 exit basin inside the allowed region."""
    return bl.compute_basin(
        bl.HenonHeilesParams(energy=0.25), bl.Region(-0.4, 0.4, -0.4, 0.4, 50)
    )


@pytest.fixture(scope="session")
def fast_driven_config():
    """Shortened driven-system budgets for quick generation tests."""
    return IntegratorConfig(t_transient=12 * 2 * np.pi, t_max=2000.0)


@pytest.fixture(scope="session")
def duffing_333():
    """Full-size Duffing basin for the repeat-10 stability criterion."""
    return bl.compute_basin(
        bl.DuffingParams(gamma=0.3, omega=1.0), bl.Region(-2.0, 2.0, -2.0, 2.0, 333)
    )
