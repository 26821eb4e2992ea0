"""Matplotlib renderings of the report outputs, written next to the CSV/JSON.

Figures are a convenience view of the delimited data, never a data source;
everything plotted here is available in the report JSON and stats CSVs.
"""

from __future__ import annotations

import math
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_SPLIT_COLORS = {"train": "tab:blue", "validation": "tab:orange", "test": "tab:green"}


def save_fdim_scaling_figure(report: dict, out_path) -> bool:
    """Log-log uncertain-fraction curve with its fitted line; False if absent."""
    scaling = report.get("fdim_scaling")
    fdim = report.get("metrics", {}).get("fdim", {})
    if not scaling or "mean" not in fdim:
        return False
    eps = [row[0] for row in scaling]
    frac = [row[1] for row in scaling]
    xs = [math.log(e - 1) for e, f in zip(eps, frac) if f > 0]
    ys = [math.log(f) for f in frac if f > 0]
    fig, ax = plt.subplots(figsize=(5, 4))
    ax.plot(xs, ys, "o", label="measured")
    if len(xs) >= 2:
        slope = 2.0 - fdim["mean"]
        x0 = sum(xs) / len(xs)
        y0 = sum(ys) / len(ys)
        ax.plot(xs, [y0 + slope * (x - x0) for x in xs], "-",
                label=f"fit: FDim = {fdim['mean']:.3f}")
    ax.set_xlabel("log(box span)")
    ax.set_ylabel("log(uncertain fraction)")
    ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=120)
    plt.close(fig)
    return True


def save_stats_figures(tables: dict, out_dir) -> list[str]:
    """One histogram PNG per metric from the fixed-bin stats tables."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, label in (("fdim", "fractal dimension"), ("sb", "basin entropy"),
                        ("sbb", "boundary basin entropy")):
        rows = tables[name]
        if not rows:
            continue
        fig, ax = plt.subplots(figsize=(6, 4))
        splits = sorted({r[0] for r in rows}, key=lambda s: list(_SPLIT_COLORS).index(s))
        for split in splits:
            sub = [r for r in rows if r[0] == split]
            centers = [(r[1] + r[2]) / 2 for r in sub]
            counts = [r[3] for r in sub]
            width = sub[0][2] - sub[0][1]
            ax.bar(centers, counts, width=width, alpha=0.55,
                   color=_SPLIT_COLORS.get(split), label=split)
        ax.set_xlabel(label)
        ax.set_ylabel("basins")
        ax.legend()
        fig.tight_layout()
        path = out / f"stats_{name}.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path.name)

    wada_rows = tables.get("wada", [])
    if wada_rows:
        fig, ax = plt.subplots(figsize=(5, 4))
        splits = sorted({r[0] for r in wada_rows},
                        key=lambda s: list(_SPLIT_COLORS).index(s))
        x = range(len(splits))
        wada_counts = [next(r[2] for r in wada_rows if r[0] == s and r[1] == "true")
                       for s in splits]
        not_counts = [next(r[2] for r in wada_rows if r[0] == s and r[1] == "false")
                      for s in splits]
        ax.bar([i - 0.2 for i in x], wada_counts, width=0.4, label="wada")
        ax.bar([i + 0.2 for i in x], not_counts, width=0.4, label="not wada")
        ax.set_xticks(list(x))
        ax.set_xticklabels(splits)
        ax.set_ylabel("basins")
        ax.legend()
        fig.tight_layout()
        path = out / "stats_wada.png"
        fig.savefig(path, dpi=120)
        plt.close(fig)
        written.append(path.name)
    return written
