"""The five dynamical systems and their basin generators."""

from __future__ import annotations

from typing import Union

from ..grid import Region
from .config import IntegratorConfig
from .duffing import DuffingParams
from .henon_heiles import HenonHeilesParams, classify_escape, hh_initial_state
from .magnetic import MagneticPendulumParams, classify_magnetic
from .newton import NewtonParams, classify_newton, polynomial_roots
from .pendulum import PendulumParams
from .driven import classify_driven, make_registry
from .registry import AttractorRegistry

SystemSpec = Union[
    DuffingParams,
    PendulumParams,
    HenonHeilesParams,
    NewtonParams,
    MagneticPendulumParams,
]

SYSTEM_NAMES = ("duffing", "pendulum", "henon_heiles", "newton", "magnetic")


def make_system(name: str, **params) -> SystemSpec:
    """Build a system spec from its name and keyword parameters."""
    classes = {
        "duffing": DuffingParams,
        "pendulum": PendulumParams,
        "henon_heiles": HenonHeilesParams,
        "newton": NewtonParams,
        "magnetic": MagneticPendulumParams,
    }
    if name not in classes:
        raise ValueError(f"unknown system {name!r}; expected one of {SYSTEM_NAMES}")
    return classes[name](**params)


def default_region(system: SystemSpec, resolution: int) -> Region:
    """A reasonable phase-space window for each system when none is given."""
    if isinstance(system, DuffingParams):
        return Region(-2.0, 2.0, -2.0, 2.0, resolution)
    if isinstance(system, PendulumParams):
        import numpy as np

        return Region(-np.pi, np.pi, -3.0, 3.0, resolution)
    if isinstance(system, HenonHeilesParams):
        return Region(-0.4, 0.4, -0.4, 0.4, resolution)
    if isinstance(system, NewtonParams):
        return Region(-2.5, 2.5, -2.5, 2.5, resolution)
    if isinstance(system, MagneticPendulumParams):
        half = system.magnet_radius + 0.5
        return Region(-half, half, -half, half, resolution)
    raise TypeError(f"not a system spec: {system!r}")


__all__ = [
    "AttractorRegistry",
    "DuffingParams",
    "HenonHeilesParams",
    "IntegratorConfig",
    "MagneticPendulumParams",
    "NewtonParams",
    "PendulumParams",
    "SystemSpec",
    "SYSTEM_NAMES",
    "classify_driven",
    "classify_escape",
    "classify_magnetic",
    "classify_newton",
    "default_region",
    "hh_initial_state",
    "make_registry",
    "make_system",
    "polynomial_roots",
]
