"""Dataset building: tiling, image files, per-basin labels, CSV manifest.

A 1000 x 1000 basin becomes ten 333 x 333 grids: nine disjoint tiles at
offsets {0, 333, 666} squared (the 999th row and column are discarded) plus
one nearest-neighbor downsample taking every 3rd pixel from (0, 0). Labels
are categorical, so the downsample strides rather than averages.

Basins are stored as 8-bit grayscale PNG, pixel value = label id, 255 =
unresolved; the phase-space region rides along in a PNG text chunk so the
files round-trip. The manifest is UTF-8 CSV, one row per image, columns in
``MANIFEST_COLUMNS`` order, floats at 17 significant digits, an empty string
where a metric errored, and the ``params`` column holding a JSON object.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image, PngImagePlugin

from .errors import BasinLabError, ParseError, SizeMismatch
from .grid import BasinGrid, Region
from .metrics import (
    EntropyConfig,
    FDimConfig,
    MetricResult,
    WadaConfig,
    basin_entropy,
    boundary_basin_entropy,
    fractal_dimension,
    repeat_metric,
)
from .wada import WadaResult, wada_test

FULL_RESOLUTION = 1000
TILE_COUNT = 3
DOWNSAMPLE_INDEX = 9

SPLIT_TRAIN = "train"
SPLIT_VALIDATION = "validation"
SPLIT_TEST = "test"

_SYSTEM_SPLITS = {
    "duffing": SPLIT_TRAIN,
    "newton": SPLIT_TRAIN,
    "pendulum": SPLIT_VALIDATION,
    "henon_heiles": SPLIT_VALIDATION,
    "magnetic": SPLIT_TEST,
}

MANIFEST_COLUMNS = (
    "path",
    "system",
    "params",
    "tile_index",
    "split",
    "fdim_mean",
    "fdim_std",
    "sb_mean",
    "sb_std",
    "sbb_mean",
    "sbb_std",
    "wada",
    "num_labels",
    "seed",
)

_REGION_KEY = "basinlab_region"


def split_for_system(system_name: str) -> str:
    """Train: Duffing + Newton; validation: pendulum + Henon-Heiles; test: magnetic."""
    try:
        return _SYSTEM_SPLITS[system_name]
    except KeyError:
        raise ValueError(f"unknown system {system_name!r}") from None


def tile_grid(grid: BasinGrid, tile_size: int) -> list[BasinGrid]:
    """Nine disjoint tiles (row-major) plus the strided downsample, any size."""
    labels = grid.labels
    tiles = []
    for bi in range(TILE_COUNT):
        for bj in range(TILE_COUNT):
            block = labels[bi * tile_size:(bi + 1) * tile_size,
                           bj * tile_size:(bj + 1) * tile_size]
            tiles.append(BasinGrid(block, grid.num_labels, None, grid.unresolved_id))
    down = labels[::TILE_COUNT, ::TILE_COUNT][:tile_size, :tile_size]
    tiles.append(BasinGrid(down, grid.num_labels, None, grid.unresolved_id))
    return tiles


def tile_basin(grid: BasinGrid) -> list[BasinGrid]:
    """Split a 1000 x 1000 basin into ten 333 x 333 grids."""
    if grid.shape != (FULL_RESOLUTION, FULL_RESOLUTION):
        raise SizeMismatch(f"expected {FULL_RESOLUTION} x {FULL_RESOLUTION}, got {grid.shape}")
    return tile_grid(grid, FULL_RESOLUTION // TILE_COUNT)


def write_basin_image(grid: BasinGrid, path) -> None:
    """Lossless 8-bit single-channel PNG; pixel value = label id."""
    if grid.num_labels > 255:
        raise ValueError("cannot encode more than 255 attractor labels in 8 bits")
    image = Image.fromarray(grid.labels, mode="L")
    info = PngImagePlugin.PngInfo()
    if grid.region is not None:
        info.add_text(_REGION_KEY, json.dumps({
            "x_min": grid.region.x_min,
            "x_max": grid.region.x_max,
            "y_min": grid.region.y_min,
            "y_max": grid.region.y_max,
            "resolution": grid.region.resolution,
        }))
    image.save(path, format="PNG", pnginfo=info)


def read_basin_image(path) -> BasinGrid:
    with Image.open(path) as image:
        if image.mode != "L":
            image = image.convert("L")
        labels = np.asarray(image, dtype=np.uint8)
        region = None
        raw = image.info.get(_REGION_KEY)
        if raw:
            d = json.loads(raw)
            region = Region(d["x_min"], d["x_max"], d["y_min"], d["y_max"], d["resolution"])
    return BasinGrid.from_labels(labels, region)


@dataclass(frozen=True)
class BasinLabels:
    """label_basin output: one MetricResult (or error string) per scalar metric."""

    fdim: MetricResult | None
    fdim_error: str | None
    sb: MetricResult | None
    sb_error: str | None
    sbb: MetricResult | None
    sbb_error: str | None
    wada: WadaResult


def label_basin(
    grid: BasinGrid,
    seed: int,
    fdim_cfg: FDimConfig | None = None,
    entropy_cfg: EntropyConfig | None = None,
    wada_cfg: WadaConfig | None = None,
    repeats: int = 10,
) -> BasinLabels:
    """Repeat-10 FDim/Sb/Sbb plus a single deterministic Wada verdict.

    Metric errors (uniform grids and the like) are recorded per field, never
    fatal to the record.
    """
    fdim_cfg = fdim_cfg or FDimConfig()
    entropy_cfg = entropy_cfg or EntropyConfig()
    results: dict[str, MetricResult | None] = {}
    errors: dict[str, str | None] = {}
    for key, fn, cfg in (
        ("fdim", fractal_dimension, fdim_cfg),
        ("sb", basin_entropy, entropy_cfg),
        ("sbb", boundary_basin_entropy, entropy_cfg),
    ):
        try:
            results[key] = repeat_metric(fn, grid, cfg, repeats=repeats, base_seed=seed)
            errors[key] = None
        except BasinLabError as exc:
            results[key] = None
            errors[key] = type(exc).__name__
    return BasinLabels(
        fdim=results["fdim"], fdim_error=errors["fdim"],
        sb=results["sb"], sb_error=errors["sb"],
        sbb=results["sbb"], sbb_error=errors["sbb"],
        wada=wada_test(grid, wada_cfg or WadaConfig()),
    )


@dataclass(frozen=True)
class ManifestRecord:
    path: str
    system: str
    params: dict
    tile_index: int
    split: str
    fdim_mean: float | None
    fdim_std: float | None
    sb_mean: float | None
    sb_std: float | None
    sbb_mean: float | None
    sbb_std: float | None
    wada: bool
    num_labels: int
    seed: int


def _format_float(value: float | None) -> str:
    return "" if value is None else format(value, ".17g")


def _parse_float(text: str) -> float | None:
    return None if text == "" else float(text)


def _csv_quote(field: str) -> str:
    if any(ch in field for ch in ',"\n\r'):
        return '"' + field.replace('"', '""') + '"'
    return field


def record_to_row(record: ManifestRecord) -> list[str]:
    return [
        record.path,
        record.system,
        json.dumps(record.params, sort_keys=True),
        str(record.tile_index),
        record.split,
        _format_float(record.fdim_mean),
        _format_float(record.fdim_std),
        _format_float(record.sb_mean),
        _format_float(record.sb_std),
        _format_float(record.sbb_mean),
        _format_float(record.sbb_std),
        "true" if record.wada else "false",
        str(record.num_labels),
        str(record.seed),
    ]


def write_manifest(records, path) -> None:
    """CSV with the documented column order; deterministic bytes."""
    lines = [",".join(MANIFEST_COLUMNS)]
    for record in records:
        lines.append(",".join(_csv_quote(f) for f in record_to_row(record)))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_manifest(path) -> list[ManifestRecord]:
    import csv

    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ParseError("empty manifest", line=1) from None
        if tuple(header) != MANIFEST_COLUMNS:
            raise ParseError(f"unexpected header {header}", line=1)
        for line_no, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(MANIFEST_COLUMNS):
                raise ParseError(f"expected {len(MANIFEST_COLUMNS)} fields, got {len(row)}",
                                 line=line_no)
            try:
                records.append(ManifestRecord(
                    path=row[0],
                    system=row[1],
                    params=json.loads(row[2]),
                    tile_index=int(row[3]),
                    split=row[4],
                    fdim_mean=_parse_float(row[5]),
                    fdim_std=_parse_float(row[6]),
                    sb_mean=_parse_float(row[7]),
                    sb_std=_parse_float(row[8]),
                    sbb_mean=_parse_float(row[9]),
                    sbb_std=_parse_float(row[10]),
                    wada={"true": True, "false": False}[row[11]],
                    num_labels=int(row[12]),
                    seed=int(row[13]),
                ))
            except (ValueError, KeyError, json.JSONDecodeError) as exc:
                raise ParseError(str(exc), line=line_no) from None
    return records


def labels_to_record(path: str, system: str, params: dict, tile_index: int,
                     labels: BasinLabels, grid: BasinGrid, seed: int) -> ManifestRecord:
    return ManifestRecord(
        path=path,
        system=system,
        params=params,
        tile_index=tile_index,
        split=split_for_system(system),
        fdim_mean=labels.fdim.mean if labels.fdim else None,
        fdim_std=labels.fdim.std if labels.fdim else None,
        sb_mean=labels.sb.mean if labels.sb else None,
        sb_std=labels.sb.std if labels.sb else None,
        sbb_mean=labels.sbb.mean if labels.sbb else None,
        sbb_std=labels.sbb.std if labels.sbb else None,
        wada=labels.wada.is_wada,
        num_labels=grid.num_labels,
        seed=seed,
    )
