"""Command-line interface: generate, measure, sweep, stats.

Exit codes: 2 for usage errors (argparse), 3 for generation/input failures,
4 when a requested metric errors (the report is still written).

Thread counts come from --threads, falling back to the BASINLAB_THREADS
environment variable; only the sweep distributes work across processes, the
Monte Carlo estimators are deterministic single-stream reductions whatever
the thread budget.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from . import __version__
from .basins import compute_basin
from .dataset import read_basin_image, read_manifest, write_basin_image
from .errors import BasinLabError
from .grid import Region
from .report import (
    ALL_METRICS,
    measure_grid,
    render_json,
    render_text,
    stats_tables,
    write_stats_tables,
)
from .sweep import load_plan, run_sweep
from .systems import IntegratorConfig, default_region, make_system

EXIT_USAGE = 2
EXIT_FAILURE = 3
EXIT_METRIC_ERROR = 4

# Flags whose comma-list values may begin with a minus sign; fused to
# --flag=value so argparse does not mistake the value for an option.
_FUSABLE = ("--coeffs", "--b", "--region")


def _fuse_list_values(argv: list[str]) -> list[str]:
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _FUSABLE and i + 1 < len(argv):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def _float_list(text: str) -> list[float]:
    return [float(part) for part in text.split(",") if part != ""]


def _default_threads() -> int:
    env = os.environ.get("BASINLAB_THREADS")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=0, help="base random seed")
    parser.add_argument("--threads", type=int, default=_default_threads(),
                        help="worker processes (sweep only; default $BASINLAB_THREADS or 1)")
    parser.add_argument("--output", help="output file or directory (command specific)")
    parser.add_argument("--budget-scale", type=float, default=1.0,
                        help="multiplier in (0, 1] on all Monte Carlo budgets")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="basinlab",
        description="Generate basins of attraction and characterize their unpredictability.",
    )
    parser.add_argument("--version", action="version", version=f"basinlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="compute one basin and write it as a PNG")
    _add_common(gen)
    gen.add_argument("--system", required=True,
                     choices=["duffing", "pendulum", "henon_heiles", "newton", "magnetic"])
    gen.add_argument("--res", type=int, default=333, help="pixels per axis")
    gen.add_argument("--region", help="x_min,x_max,y_min,y_max (system default otherwise)")
    gen.add_argument("--gamma", type=float, help="duffing forcing amplitude")
    gen.add_argument("--omega", type=float, help="forcing angular frequency")
    gen.add_argument("--forcing", type=float, help="pendulum forcing amplitude")
    gen.add_argument("--energy", type=float, help="henon_heiles total energy")
    gen.add_argument("--coeffs", help="newton polynomial coefficients a0,a1,...")
    gen.add_argument("--b", help="newton relaxation parameter re,im")
    gen.add_argument("--damping", type=float, help="magnetic pendulum drag")
    gen.add_argument("--radius", type=float, help="magnetic pendulum magnet circle radius")
    gen.add_argument("--magnets", type=int, help="magnetic pendulum magnet count (2-4)")
    gen.add_argument("--dt", type=float, help="integrator step override")
    gen.add_argument("--t-transient", type=float, help="transient time override")
    gen.add_argument("--t-max", type=float, help="integration time cap")
    gen.add_argument("--snapshots", type=int, help="stroboscopic samples per window")
    gen.add_argument("--match-tol", type=float, help="attractor matching distance")
    gen.add_argument("--stop-speed", type=float, help="fixed point speed threshold")
    gen.add_argument("--escape-radius", type=float, help="escape classification radius")
    gen.add_argument("--newton-max-iter", type=int)
    gen.add_argument("--newton-tol", type=float)

    mea = sub.add_parser("measure", help="characterize a basin image")
    _add_common(mea)
    mea.add_argument("--input", required=True, help="basin PNG to measure")
    mea.add_argument("--metrics", default=",".join(ALL_METRICS),
                     help="comma list from fdim,sb,sbb,wada")
    mea.add_argument("--repeats", type=int, default=10,
                     help="Monte Carlo repeats per scalar metric")
    mea.add_argument("--no-figures", action="store_true",
                     help="skip the scaling-figure PNG")

    swp = sub.add_parser("sweep", help="run a parameter sweep plan into a dataset")
    _add_common(swp)
    swp.add_argument("--plan", required=True, help="sweep plan JSON file")

    sta = sub.add_parser("stats", help="histogram tables from a dataset manifest")
    _add_common(sta)
    sta.add_argument("--manifest", required=True, help="manifest CSV")
    sta.add_argument("--no-figures", action="store_true",
                     help="skip the histogram PNGs")
    return parser


def _build_system(args: argparse.Namespace):
    name = args.system
    if name == "duffing":
        _require(args, "gamma", "omega")
        return make_system(name, gamma=args.gamma, omega=args.omega)
    if name == "pendulum":
        _require(args, "forcing", "omega")
        return make_system(name, forcing=args.forcing, omega=args.omega)
    if name == "henon_heiles":
        _require(args, "energy")
        return make_system(name, energy=args.energy)
    if name == "newton":
        _require(args, "coeffs")
        b = complex(1.0, 0.0)
        if args.b:
            parts = _float_list(args.b)
            if len(parts) != 2:
                raise ValueError("--b expects re,im")
            b = complex(parts[0], parts[1])
        return make_system(name, coeffs=tuple(_float_list(args.coeffs)), relaxation=b)
    _require(args, "damping", "radius", "magnets")
    return make_system(name, damping=args.damping, magnet_radius=args.radius,
                       n_magnets=args.magnets)


def _require(args: argparse.Namespace, *names: str):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        flags = ", ".join(f"--{n}" for n in missing)
        raise SystemExit2(f"--system {args.system} requires {flags}")


class SystemExit2(Exception):
    """Usage error discovered after argparse (still exit code 2)."""


def _integrator_config(args: argparse.Namespace) -> IntegratorConfig:
    overrides = {}
    for flag, field in (("dt", "dt"), ("t_transient", "t_transient"),
                        ("t_max", "t_max"), ("snapshots", "snapshot_count"),
                        ("match_tol", "match_tol"), ("stop_speed", "stop_speed"),
                        ("escape_radius", "escape_radius"),
                        ("newton_max_iter", "newton_max_iter"),
                        ("newton_tol", "newton_tol")):
        value = getattr(args, flag, None)
        if value is not None:
            overrides[field] = value
    return IntegratorConfig(**overrides)


def cmd_generate(args: argparse.Namespace) -> int:
    try:
        system = _build_system(args)
        if args.region:
            parts = _float_list(args.region)
            if len(parts) != 4:
                raise SystemExit2("--region expects x_min,x_max,y_min,y_max")
            region = Region(parts[0], parts[1], parts[2], parts[3], args.res)
        else:
            region = default_region(system, args.res)
        config = _integrator_config(args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out_path = Path(args.output) if args.output else Path(f"{args.system}.png")
    started = time.perf_counter()
    try:
        grid = compute_basin(system, region, config, seed=args.seed)
        write_basin_image(grid, out_path)
    except (BasinLabError, OSError) as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    elapsed = time.perf_counter() - started
    print(f"wrote {out_path}  labels={grid.num_labels}"
          f"  unresolved={grid.unresolved_fraction():.4f}  seconds={elapsed:.2f}")
    return 0


def cmd_measure(args: argparse.Namespace) -> int:
    metrics = tuple(m for m in args.metrics.split(",") if m)
    unknown = set(metrics) - set(ALL_METRICS)
    if unknown:
        print(f"error: unknown metrics {sorted(unknown)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        grid = read_basin_image(args.input)
    except (OSError, ValueError) as exc:
        print(f"cannot read {args.input}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    try:
        report, failed = measure_grid(
            grid, metrics=metrics, budget_scale=args.budget_scale,
            seed=args.seed, repeats=args.repeats, input_path=args.input,
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out_path = Path(args.output) if args.output else Path(args.input + ".report.json")
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_text(render_json(report), encoding="utf-8")
    sys.stdout.write(render_text(report))
    print(f"report: {out_path}")
    if not args.no_figures:
        from .figures import save_fdim_scaling_figure

        fig_path = out_path.with_suffix(".scaling.png")
        if save_fdim_scaling_figure(report, fig_path):
            print(f"figure: {fig_path}")
    return EXIT_METRIC_ERROR if failed else 0


def cmd_sweep(args: argparse.Namespace) -> int:
    try:
        points = load_plan(args.plan)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"cannot load plan {args.plan}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    if not 0.0 < args.budget_scale <= 1.0:
        print("error: --budget-scale must be in (0, 1]", file=sys.stderr)
        return EXIT_USAGE
    if args.budget_scale != 1.0:
        from dataclasses import replace

        points = [
            replace(
                p,
                fdim_cfg=replace(p.fdim_cfg, boxes_per_size=max(
                    1, round(p.fdim_cfg.boxes_per_size * args.budget_scale))),
                entropy_cfg=replace(p.entropy_cfg, n_boxes=max(
                    1, round(p.entropy_cfg.n_boxes * args.budget_scale))),
            )
            for p in points
        ]
    out_dir = Path(args.output) if args.output else Path("sweep_out")
    records = run_sweep(points, out_dir, threads=max(1, args.threads),
                        base_seed=args.seed, progress=lambda m: print(m, flush=True))
    counts: dict[str, int] = {}
    for rec in records:
        counts[rec.split] = counts.get(rec.split, 0) + 1
    summary = "  ".join(f"{split}={counts.get(split, 0)}"
                        for split in ("train", "validation", "test"))
    print(f"manifest: {out_dir / 'manifest.csv'}  records={len(records)}  {summary}")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        records = read_manifest(args.manifest)
    except (OSError, BasinLabError) as exc:
        print(f"cannot read manifest {args.manifest}: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    out_dir = Path(args.output) if args.output else Path("stats_out")
    tables = stats_tables(records)
    written = write_stats_tables(tables, out_dir)
    if not args.no_figures:
        from .figures import save_stats_figures

        written += save_stats_figures(tables, out_dir)
    print(f"stats: {out_dir}  files: {', '.join(written)}")
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(_fuse_list_values(argv))
    handlers = {
        "generate": cmd_generate,
        "measure": cmd_measure,
        "sweep": cmd_sweep,
        "stats": cmd_stats,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
