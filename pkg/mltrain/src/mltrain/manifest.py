"""Reader for the dataset manifest CSV (the cross-package contract).

The manifest is UTF-8 CSV with header
``path,system,params,tile_index,split,fdim_mean,fdim_std,sb_mean,sb_std,
sbb_mean,sbb_std,wada,num_labels,seed``; empty strings mark metrics that
errored for a basin. Image paths are relative to the manifest's directory.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

COLUMNS = (
    "path", "system", "params", "tile_index", "split",
    "fdim_mean", "fdim_std", "sb_mean", "sb_std", "sbb_mean", "sbb_std",
    "wada", "num_labels", "seed",
)

METRICS = ("fdim", "sb", "sbb", "wada")

_TARGET_COLUMN = {"fdim": "fdim_mean", "sb": "sb_mean", "sbb": "sbb_mean", "wada": "wada"}


@dataclass(frozen=True)
class Row:
    path: str
    system: str
    split: str
    fdim_mean: float | None
    sb_mean: float | None
    sbb_mean: float | None
    wada: bool

    def target(self, metric: str) -> float | None:
        value = getattr(self, _TARGET_COLUMN[metric])
        if metric == "wada":
            return float(value)
        return value


def _opt_float(text: str) -> float | None:
    return None if text == "" else float(text)


def read_rows(manifest_path) -> list[Row]:
    manifest_path = Path(manifest_path)
    rows = []
    with open(manifest_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if tuple(header) != COLUMNS:
            raise ValueError(f"unexpected manifest header: {header}")
        for record in reader:
            if not record:
                continue
            rows.append(Row(
                path=str(manifest_path.parent / record[0]),
                system=record[1],
                split=record[4],
                fdim_mean=_opt_float(record[5]),
                sb_mean=_opt_float(record[7]),
                sbb_mean=_opt_float(record[9]),
                wada={"true": True, "false": False}[record[11]],
            ))
    return rows


def split_rows(rows: list[Row], split: str) -> list[Row]:
    return [r for r in rows if r.split == split]


def rows_with_target(rows: list[Row], metric: str) -> list[Row]:
    """Rows usable as training targets for one metric (errored fields dropped)."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    return [r for r in rows if r.target(metric) is not None]
