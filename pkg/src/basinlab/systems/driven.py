"""Stroboscopic classification for the periodically driven systems.

Each trajectory is integrated past the transient, then sampled once per
forcing period T = 2*pi/omega. Windows of ``snapshot_count`` consecutive
samples are compared against the registry of attractor signatures:

* full match: every window point within match_tol of an entry cloud labels
  the pixel with that entry (lowest id first);
* recurrence: a pixel whose window is mostly covered by its OWN recent
  stroboscopic history has landed on an attractor. Such pixels may label
  through a softer partial match (most points on the cloud, the stragglers
  are absorbed into it, which is how finitely sampled chaotic attractors
  accumulate coverage), and the earliest recurrent unmatched pixel of a
  round registers its recent history as a new signature, in row-major
  order. A fresh signature that mostly overlaps an existing entry is merged
  into it instead of becoming a duplicate label.

Periodic attractors of period p <= snapshot_count * T always reproduce the
same point set per window, so they register after two windows. Chaotic
attractors take a few more rounds to self-cover; trajectories still in
transit keep drifting, never turn recurrent, and end unresolved only if
t_max runs out first.
"""

from __future__ import annotations

import numpy as np

from ..grid import UNRESOLVED_ID, Region
from .config import IntegratorConfig
from .pendulum import PendulumParams
from .registry import AttractorRegistry

DEFAULT_STEPS_PER_PERIOD = 200
DEFAULT_TRANSIENT_PERIODS = 50
MAX_LABELS = 255
SOFT_MATCH_FRACTION = 0.5
MERGE_FRACTION = 0.5
HISTORY_POINTS = 128
SIGNATURE_POINTS = 96
_CHUNK = 2048


def make_registry(params, config: IntegratorConfig) -> AttractorRegistry:
    wrap = (0,) if isinstance(params, PendulumParams) else ()
    return AttractorRegistry(config.match_tol, wrap_axes=wrap)


def _resolve_schedule(params, config: IntegratorConfig):
    period = params.forcing_period
    if config.dt is None:
        steps = DEFAULT_STEPS_PER_PERIOD
    else:
        steps = max(1, int(round(period / config.dt)))
    dt = period / steps
    if config.t_transient is None:
        transient_periods = DEFAULT_TRANSIENT_PERIODS
    else:
        transient_periods = max(1, int(np.ceil(config.t_transient / period)))
    max_periods = int(config.t_max / period)
    return dt, steps, transient_periods, max_periods


def _advance_period(params, x, v, step: int, dt: float, steps: int):
    """One forcing period of component-wise RK4; time is step * dt exactly."""
    acc = params.acceleration
    h2 = 0.5 * dt
    sixth = dt / 6.0
    for _ in range(steps):
        t = step * dt
        k1v = acc(x, v, t)
        x2 = x + h2 * v
        v2 = v + h2 * k1v
        k2v = acc(x2, v2, t + h2)
        x3 = x + h2 * v2
        v3 = v + h2 * k2v
        k3v = acc(x3, v3, t + h2)
        x4 = x + dt * v3
        v4 = v + dt * k3v
        k4v = acc(x4, v4, t + dt)
        x = x + sixth * (v + 2.0 * v2 + 2.0 * v3 + v4)
        v = v + sixth * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
        step += 1
    return x, v, step


def _self_cover_fraction(window: np.ndarray, history: np.ndarray, hist_len: np.ndarray,
                         wrap_axes, tol: float) -> np.ndarray:
    """Per pixel: fraction of window points within tol of its own prior history."""
    m, snaps, dim = window.shape
    cap = history.shape[1]
    out = np.zeros(m)
    if cap == 0:
        return out
    tol2 = tol * tol
    slot = np.arange(cap)
    for lo in range(0, m, _CHUNK):
        hi = min(lo + _CHUNK, m)
        d = window[lo:hi, :, None, :] - history[lo:hi, None, :, :]
        for ax in wrap_axes:
            d[..., ax] = (d[..., ax] + np.pi) % (2.0 * np.pi) - np.pi
        dist2 = np.sum(d * d, axis=-1)
        valid = slot[None, None, :] < hist_len[lo:hi, None, None]
        covered = ((dist2 <= tol2) & valid).any(axis=2)
        out[lo:hi] = covered.mean(axis=1)
    return out


def _entry_cover(registry: AttractorRegistry, label: int, window_wrapped: np.ndarray):
    """(full, fraction, within) of a pre-wrapped (m, S, d) window stack vs one entry."""
    m, snaps, dim = window_wrapped.shape
    within = registry.within(label, window_wrapped.reshape(m * snaps, dim))
    within = within.reshape(m, snaps)
    frac = within.mean(axis=1)
    return within.all(axis=1), frac, within


def _covered_by_cloud(points: np.ndarray, cloud: np.ndarray, wrap_axes, tol: float) -> float:
    """Fraction of ``points`` within tol of some cloud point (both pre-wrapped)."""
    d = points[:, None, :] - cloud[None, :, :]
    for ax in wrap_axes:
        d[..., ax] = (d[..., ax] + np.pi) % (2.0 * np.pi) - np.pi
    dist2 = np.sum(d * d, axis=-1)
    return float((dist2.min(axis=1) <= tol * tol).mean())


def classify_driven_batch(
    params,
    states0: np.ndarray,
    registry: AttractorRegistry,
    config: IntegratorConfig,
) -> np.ndarray:
    """Classify a (N, 2) row-major batch of initial states; returns (N,) labels.

    Mutates ``registry``: new attractors are registered in row-major
    first-discovery order, existing clouds absorb fresh samples.
    """
    states0 = np.asarray(states0, dtype=np.float64)
    n = states0.shape[0]
    labels = np.full(n, UNRESOLVED_ID, dtype=np.int64)
    dt, steps, transient_periods, max_periods = _resolve_schedule(params, config)
    snaps = config.snapshot_count
    tol = registry.match_tol
    wrap = registry.wrap_axes

    x = states0[:, 0].copy()
    v = states0[:, 1].copy()
    idx = np.arange(n)
    step = 0
    for _ in range(transient_periods):
        x, v, step = _advance_period(params, x, v, step, dt, steps)
    periods_done = transient_periods

    finite = np.isfinite(x) & np.isfinite(v)
    idx, x, v = idx[finite], x[finite], v[finite]

    history = np.empty((idx.size, 0, 2))
    hist_len = np.zeros(idx.size, dtype=np.int64)

    while idx.size and periods_done + snaps <= max_periods:
        window = np.empty((idx.size, snaps, 2))
        for s_i in range(snaps):
            x, v, step = _advance_period(params, x, v, step, dt, steps)
            window[:, s_i, 0] = x
            window[:, s_i, 1] = v
        periods_done += snaps

        finite = np.isfinite(window).all(axis=(1, 2))
        if not finite.all():
            idx, x, v = idx[finite], x[finite], v[finite]
            window, history, hist_len = window[finite], history[finite], hist_len[finite]

        window_w = registry.wrap(window)
        self_frac = _self_cover_fraction(window_w, history, hist_len, wrap, tol)
        recurrent = (self_frac >= SOFT_MATCH_FRACTION) & (hist_len >= snaps)

        unlabeled = np.ones(idx.size, dtype=bool)

        def try_entries(start_label: int):
            for e_id in range(start_label, len(registry)):
                pos = np.where(unlabeled)[0]
                if pos.size == 0:
                    return
                full, frac, within = _entry_cover(registry, e_id, window_w[pos])
                take = full | ((frac >= SOFT_MATCH_FRACTION) & recurrent[pos])
                if take.any():
                    taken = pos[take]
                    labels[idx[taken]] = e_id
                    unlabeled[taken] = False
                    registry.absorb(e_id, window_w[taken].reshape(-1, 2))

        try_entries(0)

        # Registration pass: earliest recurrent unmatched pixel founds a new
        # signature from its recent history; near-duplicates merge instead.
        for pos in np.where(recurrent)[0]:
            if not unlabeled[pos]:
                continue
            length = int(min(hist_len[pos], history.shape[1]))
            recent = history[pos, history.shape[1] - length:, :]
            cloud = np.concatenate([recent, window_w[pos]], axis=0)[-SIGNATURE_POINTS:]
            merged = None
            for e_id in range(len(registry)):
                # Symmetric: a partially sampled entry covered by this richer
                # cloud is the same attractor as much as the converse.
                if registry.within(e_id, cloud).mean() >= MERGE_FRACTION or \
                        _covered_by_cloud(registry.signature(e_id), cloud, wrap, tol) >= MERGE_FRACTION:
                    merged = e_id
                    break
            if merged is not None:
                registry.absorb(merged, cloud)
                labels[idx[pos]] = merged
                unlabeled[pos] = False
                try_entries(merged)
            elif len(registry) < MAX_LABELS:
                new_id = registry.register(cloud)
                labels[idx[pos]] = new_id
                unlabeled[pos] = False
                try_entries(new_id)
            else:
                unlabeled[pos] = False  # registry full: give up as unresolved

        history = np.concatenate([history, window_w], axis=1)
        if history.shape[1] > HISTORY_POINTS:
            history = history[:, -HISTORY_POINTS:, :]
        hist_len = np.minimum(hist_len + snaps, HISTORY_POINTS)

        keep = unlabeled & (labels[idx] == UNRESOLVED_ID)
        idx, x, v = idx[keep], x[keep], v[keep]
        history, hist_len = history[keep], hist_len[keep]

    return labels


def classify_driven(params, state0, registry: AttractorRegistry,
                    config: IntegratorConfig | None = None) -> int:
    """Classify one initial state against (and possibly extending) a registry."""
    cfg = config or IntegratorConfig()
    labels = classify_driven_batch(
        params, np.asarray(state0, dtype=np.float64)[None, :], registry, cfg
    )
    return int(labels[0])


def _consolidate(labels: np.ndarray, registry: AttractorRegistry) -> tuple[np.ndarray, AttractorRegistry]:
    """Merge registry entries that turned out to sample the same attractor.

    Signatures registered early in a run can be partial; once every cloud has
    grown, entries that mostly cover each other are one attractor. Surviving
    labels are renumbered in registration (first-discovery) order.
    """
    k = len(registry)
    if k <= 1:
        return labels, registry
    tol = registry.match_tol
    wrap = registry.wrap_axes
    parent = list(range(k))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    clouds = [registry.signature(i) for i in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            ri, rj = find(i), find(j)
            if ri == rj:
                continue
            if (_covered_by_cloud(clouds[i], clouds[j], wrap, tol) >= MERGE_FRACTION
                    or _covered_by_cloud(clouds[j], clouds[i], wrap, tol) >= MERGE_FRACTION):
                lo, hi = min(ri, rj), max(ri, rj)
                parent[hi] = lo

    roots = sorted({find(i) for i in range(k)})
    if len(roots) == k:
        return labels, registry
    new_id = {root: n for n, root in enumerate(roots)}
    table = np.arange(256, dtype=np.int64)
    table[UNRESOLVED_ID] = UNRESOLVED_ID
    for i in range(k):
        table[i] = new_id[find(i)]
    merged_registry = AttractorRegistry(tol, wrap_axes=wrap)
    for root in roots:
        group = [clouds[i] for i in range(k) if find(i) == root]
        merged_registry.register(np.concatenate(group, axis=0))
    return table[labels], merged_registry


def compute_driven_basin(params, region: Region, config: IntegratorConfig):
    """Basin labels over the (x, x') phase plane; returns (labels, registry)."""
    xs = region.x_centers()
    ys = region.y_centers()
    gx, gy = np.meshgrid(xs, ys)
    states = np.stack([gx.ravel(), gy.ravel()], axis=-1)
    registry = make_registry(params, config)
    labels = classify_driven_batch(params, states, registry, config)
    labels, registry = _consolidate(labels, registry)
    return labels.reshape(region.resolution, region.resolution), registry
