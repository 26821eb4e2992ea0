"""Integration and classification budgets.

The defaults below are the package-wide reference configuration: driven
systems step at T/200 per forcing period and discard 50 periods of transient,
the Henon-Heiles system steps at 0.005, the magnetic pendulum at 0.01. All of
them are overridable per call, which is how desk-scale smoke runs shrink
their budgets.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class IntegratorConfig:
    """Budgets for trajectory integration and asymptotic classification.

    ``dt`` and ``t_transient`` default to None, meaning "use the system's
    reference value" (T/200 and 50 forcing periods for driven systems; fixed
    dt for the autonomous ones, which take no transient).
    """

    dt: float | None = None
    t_transient: float | None = None
    t_max: float = 1e4
    snapshot_count: int = 8
    match_tol: float = 0.05
    stop_speed: float = 1e-3
    escape_radius: float = 3.0
    newton_max_iter: int = 200
    newton_tol: float = 1e-9
    dwell_time: float = 1.0

    def __post_init__(self):
        for name in ("t_max", "match_tol", "stop_speed", "escape_radius",
                     "newton_tol", "dwell_time"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.snapshot_count < 1 or self.newton_max_iter < 1:
            raise ValueError("snapshot_count and newton_max_iter must be >= 1")
        if self.dt is not None and self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.t_transient is not None:
            if self.t_transient <= 0:
                raise ValueError("t_transient must be positive")
            if self.t_transient >= self.t_max:
                raise ValueError("t_transient must be < t_max")

    def with_overrides(self, **kwargs) -> "IntegratorConfig":
        return replace(self, **kwargs)
