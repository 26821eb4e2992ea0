"""basinlab: generate basins of attraction and characterize their unpredictability.

Five paradigmatic systems (Duffing, forced damped pendulum, Henon-Heiles,
Newton fractal, magnetic pendulum), four metrics (fractal dimension, basin
entropy, boundary basin entropy, Wada property), a labeled-dataset builder,
and a CLI tying them together.
"""

from .basins import compute_basin
from .grid import UNRESOLVED_ID, BasinGrid, Region, flip_horizontal, flip_vertical, relabel
from .metrics import (
    EntropyConfig,
    FDimConfig,
    FitResult,
    MetricResult,
    WadaConfig,
    basin_entropy,
    basin_entropy_exact,
    boundary_basin_entropy,
    boundary_basin_entropy_exact,
    boundary_mask,
    box_entropy,
    fractal_dimension,
    fractal_dimension_exhaustive,
    linear_fit,
    repeat_metric,
    sample_box,
)
from .systems import (
    AttractorRegistry,
    DuffingParams,
    HenonHeilesParams,
    IntegratorConfig,
    MagneticPendulumParams,
    NewtonParams,
    PendulumParams,
    classify_driven,
    classify_escape,
    classify_magnetic,
    classify_newton,
    default_region,
    hh_initial_state,
    make_system,
    polynomial_roots,
)
from .wada import WadaResult, fatten, merge_labels, wada_test

__version__ = "0.1.0"

__all__ = [
    "AttractorRegistry",
    "BasinGrid",
    "DuffingParams",
    "EntropyConfig",
    "FDimConfig",
    "FitResult",
    "HenonHeilesParams",
    "IntegratorConfig",
    "MagneticPendulumParams",
    "MetricResult",
    "NewtonParams",
    "PendulumParams",
    "Region",
    "UNRESOLVED_ID",
    "WadaConfig",
    "WadaResult",
    "basin_entropy",
    "basin_entropy_exact",
    "boundary_basin_entropy",
    "boundary_basin_entropy_exact",
    "boundary_mask",
    "box_entropy",
    "classify_driven",
    "classify_escape",
    "classify_magnetic",
    "classify_newton",
    "compute_basin",
    "default_region",
    "fatten",
    "flip_horizontal",
    "flip_vertical",
    "fractal_dimension",
    "fractal_dimension_exhaustive",
    "hh_initial_state",
    "linear_fit",
    "make_system",
    "merge_labels",
    "polynomial_roots",
    "relabel",
    "repeat_metric",
    "sample_box",
    "wada_test",
]
