import json
import subprocess
import sys

import numpy as np
import pytest

import gridgen
from basinlab.cli import main
from basinlab.dataset import read_basin_image, write_basin_image


def test_generate_newton_cubic(tmp_path, capsys):
    out = tmp_path / "cubic.png"
    code = main([
        "generate", "--system", "newton", "--coeffs", "-1,0,0,1", "--b", "1,0",
        "--region", "-2.5,2.5,-2.5,2.5", "--res", "64", "--output", str(out),
    ])
    assert code == 0
    grid = read_basin_image(out)
    assert grid.shape == (64, 64)
    assert grid.num_labels == 3
    assert "labels=3" in capsys.readouterr().out


def test_generate_duffing_small(tmp_path, capsys):
    out = tmp_path / "duffing.png"
    code = main([
        "generate", "--system", "duffing", "--gamma", "0.3", "--omega", "1.0",
        "--res", "24", "--t-transient", "40", "--t-max", "1200",
        "--output", str(out),
    ])
    assert code == 0
    assert read_basin_image(out).shape == (24, 24)


def test_generate_missing_flag_exits_2(tmp_path):
    assert main(["generate", "--system", "duffing", "--gamma", "0.3",
                 "--output", str(tmp_path / "x.png")]) == 2


def test_missing_subcommand_flag_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["measure"])  # --input is required
    assert err.value.code == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "basinlab.cli", "--version"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert "basinlab" in proc.stdout


def test_measure_uniform_image_exit_4(tmp_path, capsys):
    img = tmp_path / "flat.png"
    write_basin_image(gridgen.uniform(n=40), img)
    report_path = tmp_path / "report.json"
    code = main([
        "measure", "--input", str(img), "--output", str(report_path),
        "--budget-scale", "0.01", "--no-figures",
    ])
    assert code == 4
    report = json.loads(report_path.read_text())
    assert report["metrics"]["sb"]["mean"] == 0.0
    assert report["metrics"]["fdim"] == {"error": "NoBoundaryDetected"}
    assert report["metrics"]["wada"]["reason"] == "too_few_basins"


def test_measure_half_plane(tmp_path):
    img = tmp_path / "half.png"
    write_basin_image(gridgen.half_plane(n=333), img)
    report_path = tmp_path / "report.json"
    code = main([
        "measure", "--input", str(img), "--output", str(report_path),
        "--budget-scale", "0.05", "--no-figures",
    ])
    assert code == 0
    report = json.loads(report_path.read_text())
    assert report["metrics"]["fdim"]["mean"] == pytest.approx(1.0, abs=0.05)
    assert report["metrics"]["sbb"]["mean"] >= report["metrics"]["sb"]["mean"]


def test_measure_writes_scaling_figure(tmp_path):
    img = tmp_path / "half.png"
    write_basin_image(gridgen.half_plane(n=100), img)
    report_path = tmp_path / "r.json"
    code = main([
        "measure", "--input", str(img), "--output", str(report_path),
        "--budget-scale", "0.01",
    ])
    assert code == 0
    assert (tmp_path / "r.scaling.png").exists()


def test_measure_deterministic_across_runs_and_threads(tmp_path):
    img = tmp_path / "noise.png"
    write_basin_image(gridgen.iid_noise(n=64, labels=3, seed=2), img)
    payloads = []
    for run, threads in ((0, "1"), (1, "1"), (2, "4")):
        out = tmp_path / f"report_{run}.json"
        code = main([
            "measure", "--input", str(img), "--output", str(out),
            "--budget-scale", "0.02", "--seed", "11", "--threads", threads,
            "--no-figures",
        ])
        assert code == 0
        payloads.append(out.read_bytes())
    assert payloads[0] == payloads[1] == payloads[2]


def test_sweep_and_stats_cli(tmp_path):
    plan = {
        "system": "duffing",
        "resolution": 48,
        "region": {"x_min": -2.0, "x_max": 2.0, "y_min": -2.0, "y_max": 2.0},
        "parameters": {"gamma": [0.3], "omega": [1.0]},
        "budgets": {
            "fdim": {"eps_min": 3, "eps_max": 15, "eps_step": 3, "boxes_per_size": 500},
            "entropy": {"box_size": 15, "n_boxes": 500},
            "integrator": {"t_transient": 60.0, "t_max": 1500.0},
            "repeats": 2,
        },
    }
    plan_path = tmp_path / "plan.json"
    plan_path.write_text(json.dumps(plan))
    out_dir = tmp_path / "data"
    assert main(["sweep", "--plan", str(plan_path), "--output", str(out_dir)]) == 0
    assert (out_dir / "manifest.csv").exists()

    stats_dir = tmp_path / "stats"
    assert main(["stats", "--manifest", str(out_dir / "manifest.csv"),
                 "--output", str(stats_dir)]) == 0
    fdim_lines = (stats_dir / "stats_fdim.csv").read_text().splitlines()
    assert fdim_lines[0] == "split,bin_left,bin_right,count"
    counted = sum(int(line.split(",")[3]) for line in fdim_lines[1:])
    from basinlab.dataset import read_manifest

    with_value = sum(1 for r in read_manifest(out_dir / "manifest.csv")
                     if r.fdim_mean is not None)
    assert counted == with_value  # histogram covers exactly records-with-value
    wada_lines = (stats_dir / "stats_wada.csv").read_text().splitlines()
    assert wada_lines[0] == "split,wada,count"
    assert sum(int(line.split(",")[2]) for line in wada_lines[1:]) == 10
    assert (stats_dir / "stats_fdim.png").exists()


def test_stats_missing_manifest_exit_3(tmp_path):
    assert main(["stats", "--manifest", str(tmp_path / "nope.csv"),
                 "--output", str(tmp_path)]) == 3


def test_stats_empty_manifest_header_only(tmp_path):
    from basinlab.dataset import write_manifest

    manifest = tmp_path / "manifest.csv"
    write_manifest([], manifest)
    out = tmp_path / "stats"
    assert main(["stats", "--manifest", str(manifest), "--output", str(out),
                 "--no-figures"]) == 0
    for name in ("fdim", "sb", "sbb", "wada"):
        lines = (out / f"stats_{name}.csv").read_text().splitlines()
        assert len(lines) == 1  # header only


def test_stats_mixed_splits_grouped(tmp_path):
    from basinlab.dataset import ManifestRecord, write_manifest

    def rec(path, system, split, wada):
        return ManifestRecord(
            path=path, system=system, params={}, tile_index=0, split=split,
            fdim_mean=1.5, fdim_std=0.0, sb_mean=0.4, sb_std=0.0,
            sbb_mean=0.8, sbb_std=0.0, wada=wada, num_labels=3, seed=0,
        )

    manifest = tmp_path / "manifest.csv"
    write_manifest([
        rec("a.png", "duffing", "train", True),
        rec("b.png", "pendulum", "validation", False),
        rec("c.png", "magnetic", "test", True),
    ], manifest)
    out = tmp_path / "stats"
    assert main(["stats", "--manifest", str(manifest), "--output", str(out),
                 "--no-figures"]) == 0
    wada_lines = (out / "stats_wada.csv").read_text().splitlines()[1:]
    splits = [line.split(",")[0] for line in wada_lines]
    assert splits == ["train", "train", "validation", "validation", "test", "test"]


def test_sweep_unreadable_plan_exit_3(tmp_path):
    bad = tmp_path / "plan.json"
    bad.write_text("{not json")
    assert main(["sweep", "--plan", str(bad), "--output", str(tmp_path / "o")]) == 3


def test_threads_env_fallback(monkeypatch):
    from basinlab.cli import build_parser

    monkeypatch.setenv("BASINLAB_THREADS", "7")
    args = build_parser().parse_args(["stats", "--manifest", "m.csv"])
    assert args.threads == 7
    monkeypatch.setenv("BASINLAB_THREADS", "junk")
    args = build_parser().parse_args(["stats", "--manifest", "m.csv"])
    assert args.threads == 1


def test_budget_scale_one_is_reference_budgets():
    from basinlab.metrics import EntropyConfig, FDimConfig, WadaConfig
    from basinlab.report import scaled_configs

    fdim, entropy, wada = scaled_configs(1.0, seed=3)
    assert fdim == FDimConfig(seed=3)
    assert entropy == EntropyConfig(seed=3)
    assert wada == WadaConfig()
    assert fdim.boxes_per_size == 350_000 and fdim.sizes() == list(range(3, 34, 3))
    assert entropy.box_size == 15 and entropy.n_boxes == 350_000
    assert wada.fattening_r == 5
    with pytest.raises(ValueError):
        scaled_configs(0.0, seed=0)
    with pytest.raises(ValueError):
        scaled_configs(1.5, seed=0)
