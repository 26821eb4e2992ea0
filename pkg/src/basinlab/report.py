"""Measurement reports and histogram stats tables.

The measure report is a JSON document with a fixed key order and no
timestamps, so identical inputs and seeds produce byte-identical files. The
stats tables bin metric values on fixed edges (FDim on [1, 2], entropies on
[0, ln 5], all with step 0.025) so histograms are comparable across runs;
values outside the range are clipped into the edge bins.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict

import numpy as np

from .dataset import ManifestRecord
from .errors import BasinLabError
from .grid import BasinGrid
from .metrics import (
    EntropyConfig,
    FDimConfig,
    WadaConfig,
    basin_entropy,
    boundary_basin_entropy,
    fractal_dimension,
    repeat_metric,
    uncertain_fractions,
)
from .wada import wada_test

SCHEMA = "basinlab.measure.v1"
ALL_METRICS = ("fdim", "sb", "sbb", "wada")
UNRESOLVED_WARN_FRACTION = 0.01

FDIM_BIN_RANGE = (1.0, 2.0)
ENTROPY_BIN_RANGE = (0.0, math.log(5.0))
BIN_STEP = 0.025
SPLIT_ORDER = ("train", "validation", "test")


def scaled_configs(budget_scale: float, seed: int) -> tuple[FDimConfig, EntropyConfig, WadaConfig]:
    """Reference budgets multiplied by the Monte Carlo budget scale."""
    if not 0.0 < budget_scale <= 1.0:
        raise ValueError("budget scale must be in (0, 1]")
    fdim = FDimConfig(boxes_per_size=max(1, round(350_000 * budget_scale)), seed=seed)
    entropy = EntropyConfig(n_boxes=max(1, round(350_000 * budget_scale)), seed=seed)
    return fdim, entropy, WadaConfig()


def measure_grid(
    grid: BasinGrid,
    metrics=ALL_METRICS,
    budget_scale: float = 1.0,
    seed: int = 0,
    repeats: int = 10,
    input_path: str | None = None,
) -> tuple[dict, bool]:
    """Run the selected metrics; returns (report dict, any_metric_errored)."""
    fdim_cfg, entropy_cfg, wada_cfg = scaled_configs(budget_scale, seed)
    report: dict = {
        "schema": SCHEMA,
        "input": input_path,
        "grid": {
            "width": grid.width,
            "height": grid.height,
            "num_labels": grid.num_labels,
            "unresolved_fraction": grid.unresolved_fraction(),
        },
        "settings": {
            "seed": seed,
            "budget_scale": budget_scale,
            "repeats": repeats,
            "fdim": asdict(fdim_cfg),
            "entropy": asdict(entropy_cfg),
            "wada": asdict(wada_cfg),
        },
        "warnings": [],
        "metrics": {},
    }
    if grid.unresolved_fraction() > UNRESOLVED_WARN_FRACTION:
        report["warnings"].append(
            f"unresolved fraction {grid.unresolved_fraction():.4f} exceeds "
            f"{UNRESOLVED_WARN_FRACTION}; labels may be unreliable"
        )

    failed = False
    estimators = {
        "fdim": (fractal_dimension, fdim_cfg),
        "sb": (basin_entropy, entropy_cfg),
        "sbb": (boundary_basin_entropy, entropy_cfg),
    }
    for name in metrics:
        if name == "wada":
            verdict = wada_test(grid, wada_cfg)
            report["metrics"]["wada"] = {
                "verdict": verdict.verdict,
                "reason": verdict.reason,
                "pairs": [
                    {
                        "label_a": p.label_a,
                        "label_b": p.label_b,
                        "passed": p.passed,
                        "merged_uncovered": p.merged_uncovered,
                        "original_uncovered": p.original_uncovered,
                    }
                    for p in verdict.pairs
                ],
            }
            continue
        fn, cfg = estimators[name]
        try:
            res = repeat_metric(fn, grid, cfg, repeats=repeats, base_seed=seed)
            report["metrics"][name] = {
                "mean": res.mean,
                "std": res.std,
                "repeats": res.repeats,
                "samples": list(res.samples),
            }
        except BasinLabError as exc:
            report["metrics"][name] = {"error": type(exc).__name__}
            failed = True

    if "fdim" in metrics and "error" not in report["metrics"].get("fdim", {"error": 1}):
        report["fdim_scaling"] = [
            [eps, frac] for eps, frac in uncertain_fractions(grid, fdim_cfg)
        ]
    return report, failed


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2) + "\n"


def render_text(report: dict) -> str:
    lines = [
        f"grid {report['grid']['width']}x{report['grid']['height']}"
        f"  labels={report['grid']['num_labels']}"
        f"  unresolved={report['grid']['unresolved_fraction']:.4f}"
    ]
    for warning in report["warnings"]:
        lines.append(f"warning: {warning}")
    for name in ("fdim", "sb", "sbb"):
        entry = report["metrics"].get(name)
        if entry is None:
            continue
        if "error" in entry:
            lines.append(f"{name:4s} error: {entry['error']}")
        else:
            lines.append(
                f"{name:4s} mean={entry['mean']:.6f}  std={entry['std']:.6f}"
                f"  repeats={entry['repeats']}"
            )
    wada = report["metrics"].get("wada")
    if wada is not None:
        tag = wada["verdict"]
        if wada["reason"]:
            tag += f" ({wada['reason']})"
        lines.append(f"wada {tag}")
        for p in wada["pairs"]:
            state = "pass" if p["passed"] else "FAIL"
            lines.append(
                f"  pair ({p['label_a']},{p['label_b']}): {state}"
                f"  merged_uncovered={p['merged_uncovered']}"
                f"  original_uncovered={p['original_uncovered']}"
            )
    return "\n".join(lines) + "\n"


def _bin_edges(lo: float, hi: float) -> np.ndarray:
    n = int(math.ceil((hi - lo) / BIN_STEP))
    return lo + BIN_STEP * np.arange(n + 1)


def _histogram_rows(records: list[ManifestRecord], field: str,
                    lo: float, hi: float) -> list[tuple[str, float, float, int]]:
    edges = _bin_edges(lo, hi)
    rows = []
    splits = [s for s in SPLIT_ORDER if any(r.split == s for r in records)]
    for split in splits:
        values = [getattr(r, field) for r in records
                  if r.split == split and getattr(r, field) is not None]
        clipped = np.clip(np.array(values, dtype=float), edges[0], edges[-1]) \
            if values else np.empty(0)
        counts, _ = np.histogram(clipped, bins=edges)
        for k in range(edges.size - 1):
            rows.append((split, float(edges[k]), float(edges[k + 1]), int(counts[k])))
    return rows


def stats_tables(records: list[ManifestRecord]) -> dict[str, list]:
    """Fixed-bin histogram rows per metric, plus Wada true/false counts."""
    tables = {
        "fdim": _histogram_rows(records, "fdim_mean", *FDIM_BIN_RANGE),
        "sb": _histogram_rows(records, "sb_mean", *ENTROPY_BIN_RANGE),
        "sbb": _histogram_rows(records, "sbb_mean", *ENTROPY_BIN_RANGE),
    }
    wada_rows = []
    splits = [s for s in SPLIT_ORDER if any(r.split == s for r in records)]
    for split in splits:
        group = [r for r in records if r.split == split]
        wada_rows.append((split, "true", sum(1 for r in group if r.wada)))
        wada_rows.append((split, "false", sum(1 for r in group if not r.wada)))
    tables["wada"] = wada_rows
    return tables


def write_stats_tables(tables: dict[str, list], out_dir) -> list[str]:
    """One CSV per metric; returns the file names written."""
    from pathlib import Path

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name in ("fdim", "sb", "sbb"):
        lines = ["split,bin_left,bin_right,count"]
        for split, left, right, count in tables[name]:
            lines.append(f"{split},{left:.6f},{right:.6f},{count}")
        path = out / f"stats_{name}.csv"
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path.name)
    lines = ["split,wada,count"]
    for split, value, count in tables["wada"]:
        lines.append(f"{split},{value},{count}")
    path = out / "stats_wada.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    written.append(path.name)
    return written
