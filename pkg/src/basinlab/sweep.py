"""Parameter sweep harness: plan JSON in, labeled image corpus + manifest out.

A plan lists one or more sweeps; each sweep names a system, a phase-space
region, a resolution, parameter axes, and optional budget overrides::

    {"sweeps": [{
        "system": "duffing",
        "resolution": 1000,
        "region": {"x_min": -2, "x_max": 2, "y_min": -2, "y_max": 2},
        "parameters": {"gamma": {"min": 0.1, "max": 0.5, "count": 2},
                        "omega": [0.2, 2.5]},
        "budgets": {"fdim": {"boxes_per_size": 2000},
                     "entropy": {"n_boxes": 2000},
                     "integrator": {"t_transient": 40.0},
                     "repeats": 10}
    }]}

An axis is an explicit list, a {min, max, count} range, or a fixed scalar;
points are the Cartesian product in listed order, last axis fastest. Every
basin is tiled into ten grids (resolution // 3 per side; 1000 -> 333 as in
the reference corpus), each labeled with per-tile seeds derived from
(base_seed, system, params, tile_index), so records do not depend on sweep
order or worker count. Completed records are skipped by path on rerun.
"""

from __future__ import annotations

import json
import sys
import traceback
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass
from itertools import product
from pathlib import Path

from .basins import compute_basin
from .dataset import (
    ManifestRecord,
    label_basin,
    labels_to_record,
    read_manifest,
    tile_grid,
    write_basin_image,
    write_manifest,
)
from .errors import BasinLabError
from .grid import Region
from .metrics import EntropyConfig, FDimConfig, WadaConfig
from .rng import derive_seed
from .systems import IntegratorConfig, NewtonParams, default_region, make_system

TILES_PER_BASIN = 10


@dataclass(frozen=True)
class SweepPoint:
    index: int
    system_name: str
    params: dict
    region: Region
    resolution: int
    fdim_cfg: FDimConfig
    entropy_cfg: EntropyConfig
    wada_cfg: WadaConfig
    integrator_cfg: IntegratorConfig
    repeats: int


def build_system(name: str, params: dict):
    """Instantiate a system spec from manifest-style parameter values."""
    if name == "newton":
        return NewtonParams(
            coeffs=tuple(params["coeffs"]),
            relaxation=complex(params.get("b_re", 1.0), params.get("b_im", 0.0)),
        )
    if name == "magnetic":
        fixed = dict(params)
        if "n_magnets" in fixed:
            fixed["n_magnets"] = int(fixed["n_magnets"])
        return make_system(name, **fixed)
    return make_system(name, **params)


def _expand_axis(value) -> list:
    if isinstance(value, dict):
        count = int(value["count"])
        if count < 1:
            raise ValueError("axis count must be >= 1")
        lo, hi = float(value["min"]), float(value["max"])
        if count == 1:
            return [lo]
        return [lo + (hi - lo) * k / (count - 1) for k in range(count)]
    if isinstance(value, list):
        return list(value)
    return [value]


def load_plan(source) -> list[SweepPoint]:
    """Parse a plan (path, JSON string, or already-loaded object) into points."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as fh:
            doc = json.load(fh)
    else:
        doc = source
    if isinstance(doc, dict) and "sweeps" in doc:
        sweeps = doc["sweeps"]
    elif isinstance(doc, list):
        sweeps = doc
    else:
        sweeps = [doc]

    points: list[SweepPoint] = []
    for sweep in sweeps:
        name = sweep["system"]
        resolution = int(sweep.get("resolution", 1000))
        if resolution < 6:
            raise ValueError("resolution must be >= 6 to tile into thirds")
        budgets = sweep.get("budgets", {})
        fdim_cfg = FDimConfig(**budgets.get("fdim", {}))
        entropy_cfg = EntropyConfig(**budgets.get("entropy", {}))
        wada_cfg = WadaConfig(**budgets.get("wada", {}))
        integrator_cfg = IntegratorConfig(**budgets.get("integrator", {}))
        repeats = int(budgets.get("repeats", 10))

        axes = sweep.get("parameters", {})
        keys = list(axes.keys())
        expanded = [_expand_axis(axes[k]) for k in keys]
        for combo in product(*expanded) if keys else [()]:
            params = dict(zip(keys, combo))
            system = build_system(name, params)  # validates parameter values
            if "region" in sweep:
                r = sweep["region"]
                region = Region(r["x_min"], r["x_max"], r["y_min"], r["y_max"], resolution)
            else:
                region = default_region(system, resolution)
            points.append(SweepPoint(
                index=len(points),
                system_name=name,
                params=params,
                region=region,
                resolution=resolution,
                fdim_cfg=fdim_cfg,
                entropy_cfg=entropy_cfg,
                wada_cfg=wada_cfg,
                integrator_cfg=integrator_cfg,
                repeats=repeats,
            ))
    return points


def point_image_paths(point: SweepPoint) -> list[str]:
    stem = f"{point.system_name}_{point.index:05d}"
    return [f"{stem}_t{tile}.png" for tile in range(TILES_PER_BASIN)]


def _process_point(point: SweepPoint, out_dir: str, base_seed: int) -> list[ManifestRecord]:
    system = build_system(point.system_name, point.params)
    grid_seed = derive_seed(base_seed, point.system_name, point.params)
    grid = compute_basin(system, point.region, point.integrator_cfg, seed=grid_seed)
    tiles = tile_grid(grid, point.resolution // 3)
    records = []
    for tile_index, (tile, rel_path) in enumerate(zip(tiles, point_image_paths(point))):
        metric_seed = derive_seed(base_seed, point.system_name, point.params, tile_index)
        labels = label_basin(
            tile, metric_seed,
            fdim_cfg=point.fdim_cfg,
            entropy_cfg=point.entropy_cfg,
            wada_cfg=point.wada_cfg,
            repeats=point.repeats,
        )
        write_basin_image(tile, Path(out_dir) / rel_path)
        records.append(labels_to_record(
            rel_path, point.system_name, point.params, tile_index, labels, tile, metric_seed,
        ))
    return records


def _load_completed(out_dir: Path) -> dict[str, ManifestRecord]:
    manifest_path = out_dir / "manifest.csv"
    if not manifest_path.exists():
        return {}
    try:
        existing = read_manifest(manifest_path)
    except BasinLabError:
        return {}
    return {
        rec.path: rec
        for rec in existing
        if (out_dir / rec.path).exists()
    }


def run_sweep(points: list[SweepPoint], out_dir, threads: int = 1,
              base_seed: int = 0, progress=None) -> list[ManifestRecord]:
    """Compute, tile, label and persist every point; returns plan-ordered records.

    Reruns skip points whose ten records and images already exist. Failures
    are reported through ``progress`` and skipped; the sweep continues.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    say = progress or (lambda msg: None)

    completed = _load_completed(out)
    by_point: dict[int, list[ManifestRecord]] = {}
    todo = []
    for point in points:
        paths = point_image_paths(point)
        if all(p in completed for p in paths):
            by_point[point.index] = [completed[p] for p in paths]
            say(f"point {point.index} ({point.system_name}): already complete, skipped")
        else:
            todo.append(point)

    def flush():
        ordered = [rec for i in sorted(by_point) for rec in by_point[i]]
        write_manifest(ordered, out / "manifest.csv")

    if todo and threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            futures = {
                pool.submit(_process_point, point, str(out), base_seed): point
                for point in todo
            }
            for future in as_completed(futures):
                point = futures[future]
                try:
                    by_point[point.index] = future.result()
                    say(f"point {point.index} ({point.system_name}): done")
                except Exception:
                    say(f"point {point.index} ({point.system_name}) failed:\n"
                        f"{traceback.format_exc()}")
                flush()
    else:
        for point in todo:
            try:
                by_point[point.index] = _process_point(point, str(out), base_seed)
                say(f"point {point.index} ({point.system_name}): done")
            except Exception:
                say(f"point {point.index} ({point.system_name}) failed:\n"
                    f"{traceback.format_exc()}")
            flush()

    flush()
    return [rec for i in sorted(by_point) for rec in by_point[i]]
