"""Newton fractal: relaxed Newton iteration of a complex polynomial.

    z_{n+1} = z_n - b * p(z_n) / p'(z_n)

The basin label of a pixel is the index of the root its iteration lands on.
Roots are computed up front with the Aberth-Ehrlich simultaneous iteration
and sorted by (real, imag), so labels are stable for a given polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import RootFindingFailed
from ..grid import UNRESOLVED_ID, Region
from .config import IntegratorConfig


@dataclass(frozen=True)
class NewtonParams:
    """Polynomial coefficients (ascending, a_0 first) and relaxation parameter b."""

    coeffs: tuple[float, ...]
    relaxation: complex = 1.0 + 0.0j

    name = "newton"

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "relaxation", complex(self.relaxation))
        if len(coeffs) < 3:
            raise ValueError("polynomial degree must be at least 2")
        if coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        if self.relaxation == 0:
            raise ValueError("relaxation parameter b must be nonzero")

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def param_dict(self) -> dict:
        return {
            "coeffs": list(self.coeffs),
            "b_re": self.relaxation.real,
            "b_im": self.relaxation.imag,
        }


def polynomial_eval(coeffs, z):
    """Horner evaluation; works on scalars and arrays."""
    acc = np.zeros_like(np.asarray(z, dtype=np.complex128)) + coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * z + c
    return acc


def derivative_coeffs(coeffs) -> tuple[float, ...]:
    return tuple(k * c for k, c in enumerate(coeffs))[1:]


def polynomial_roots(coeffs, max_iter: int = 500, tol: float = 1e-13) -> np.ndarray:
    """All complex roots via Aberth-Ehrlich, sorted by (real, imag).

    Simultaneous iteration seeded on a circle of radius 1 + max|a_n / a_lead|,
    with a small angular offset so symmetric polynomials do not start on their
    own symmetry axes. Raises RootFindingFailed unless every residual
    satisfies |p(root)| < 1e-9 * max|a_n|.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.size < 2 or c[-1] == 0:
        raise ValueError("need degree >= 1 with nonzero leading coefficient")
    deg = c.size - 1
    dc = np.asarray(derivative_coeffs(c), dtype=np.complex128)

    radius = 1.0 + np.max(np.abs(c[:-1] / c[-1])) if deg > 0 else 1.0
    angles = 2.0 * np.pi * np.arange(deg) / deg + 0.4 / deg
    z = radius * np.exp(1j * angles)

    for _ in range(max_iter):
        p = polynomial_eval(c, z)
        dp = polynomial_eval(dc, z)
        dp = np.where(dp == 0, 1e-300, dp)
        w = p / dp
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        s = np.sum(1.0 / diff, axis=1)
        corr = w / (1.0 - w * s)
        z = z - corr
        if np.max(np.abs(corr)) < tol * (1.0 + np.max(np.abs(z))):
            break

    residual = np.max(np.abs(polynomial_eval(c, z)))
    bound = 1e-9 * np.max(np.abs(c))
    if not np.isfinite(residual) or residual >= bound:
        raise RootFindingFailed(
            f"max residual {residual:.3e} exceeds bound {bound:.3e} after {max_iter} iterations"
        )
    order = np.lexsort((z.imag, z.real))
    return z[order]


def newton_iterate(z0, params: NewtonParams, config: IntegratorConfig):
    """Relaxed Newton orbit of an array of starting points.

    Returns (final z, iterations used, converged mask). A point is converged
    once |z_{n+1} - z_n| < newton_tol; the iteration count excludes that
    final sub-tolerance step, so a point starting exactly on a root reports
    zero iterations. Points hitting p'(z) = 0 or a non-finite value are
    frozen unconverged.
    """
    c = np.asarray(params.coeffs, dtype=np.complex128)
    dc = np.asarray(derivative_coeffs(c), dtype=np.complex128)
    b = params.relaxation

    z = np.array(np.asarray(z0, dtype=np.complex128), copy=True)
    flat = z.reshape(-1)
    iters = np.zeros(flat.shape, dtype=np.int64)
    converged = np.zeros(flat.shape, dtype=bool)
    active = np.ones(flat.shape, dtype=bool)

    for _ in range(config.newton_max_iter):
        if not active.any():
            break
        za = flat[active]
        p = polynomial_eval(c, za)
        dp = polynomial_eval(dc, za)
        bad = (dp == 0) | ~np.isfinite(p) | ~np.isfinite(dp)
        step = np.where(bad, 0.0, b * p / np.where(dp == 0, 1.0, dp))
        z_new = za - step
        done = (np.abs(z_new - za) < config.newton_tol) & ~bad
        flat[active] = z_new
        idx = np.where(active)[0]
        iters[idx[~bad & ~done]] += 1
        converged[idx[done]] = True
        active[idx[done | bad]] = False
        if not np.isfinite(z_new).all():
            blown = ~np.isfinite(z_new)
            active[idx[blown]] = False
    return flat.reshape(z.shape), iters.reshape(z.shape), converged.reshape(z.shape)


def _labels_from_roots(z, converged, roots: np.ndarray, match_tol: float) -> np.ndarray:
    dist = np.abs(z[..., None] - roots[None, :])
    nearest = np.argmin(dist, axis=-1)
    near_enough = np.take_along_axis(dist, nearest[..., None], axis=-1)[..., 0] <= match_tol
    labels = np.where(converged & near_enough, nearest, UNRESOLVED_ID)
    return labels.astype(np.int64)


def classify_newton(z0: complex, params: NewtonParams,
                    config: IntegratorConfig | None = None) -> int:
    """Label of a single starting point: index of the root it converges to."""
    cfg = config or IntegratorConfig()
    roots = polynomial_roots(params.coeffs)
    z, _, converged = newton_iterate(np.asarray([z0]), params, cfg)
    return int(_labels_from_roots(z, converged, roots, cfg.match_tol)[0])


def compute_newton_basin(params: NewtonParams, region: Region, config: IntegratorConfig):
    """Basin labels over the complex plane; returns (labels, roots)."""
    roots = polynomial_roots(params.coeffs)
    xs = region.x_centers()
    ys = region.y_centers()
    gx, gy = np.meshgrid(xs, ys)
    z0 = gx + 1j * gy
    z, _, converged = newton_iterate(z0, params, config)
    labels = _labels_from_roots(z, converged, roots, config.match_tol)
    return labels, roots
