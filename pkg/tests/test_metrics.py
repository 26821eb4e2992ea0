import math
from math import comb, log

import numpy as np
import pytest

import gridgen
from basinlab import (
    BasinGrid,
    EntropyConfig,
    FDimConfig,
    basin_entropy,
    basin_entropy_exact,
    boundary_basin_entropy,
    boundary_basin_entropy_exact,
    boundary_mask,
    box_entropy,
    flip_horizontal,
    flip_vertical,
    fractal_dimension,
    fractal_dimension_exhaustive,
    linear_fit,
    relabel,
    repeat_metric,
    sample_box,
)
from basinlab.errors import (
    BoxTooLarge,
    DegenerateFit,
    InsufficientScaling,
    NoBoundaryDetected,
    NoBoundarySampled,
)
from basinlab.metrics import box_entropy_samples, uncertain_fractions
from basinlab.rng import make_rng
from oracles import oracle_mean_box_entropy, oracle_uncertain_fraction


# ---------------------------------------------------------------- masks

def test_boundary_mask_uniform_grid():
    assert not boundary_mask(gridgen.uniform(n=10)).any()


def test_boundary_mask_vertical_split():
    g = gridgen.half_plane(n=20, split=10)
    mask = boundary_mask(g)
    expected = np.zeros((20, 20), bool)
    expected[:, 9:11] = True
    assert np.array_equal(mask, expected)


def test_boundary_mask_checkerboard():
    assert boundary_mask(gridgen.checkerboard(n=9)).all()




# ---------------------------------------------------------------- sampling

def test_sample_box_single_position():
    rng = make_rng(0)
    assert sample_box(rng, 16, (16, 16)) == (0, 0)


def test_sample_box_too_large():
    with pytest.raises(BoxTooLarge):
        sample_box(make_rng(0), 17, (16, 20))


def test_sample_box_deterministic():
    draws_a = [sample_box(make_rng(42), 15, (333, 333)) for _ in range(5)]
    draws_b = [sample_box(make_rng(42), 15, (333, 333)) for _ in range(5)]
    assert draws_a == draws_b


def test_sample_box_corners_uniform():
    # 1e5 draws of box 15 on 333^2: corners live on [0, 318]^2; coarse
    # chi-square on a 10x10 binning of rows x cols stays near its mean.
    rng = make_rng(7)
    rows = np.empty(100_000, int)
    cols = np.empty(100_000, int)
    for i in range(rows.size):
        rows[i], cols[i] = sample_box(rng, 15, (333, 333))
    assert rows.min() >= 0 and rows.max() <= 318
    assert cols.min() >= 0 and cols.max() <= 318
    hist, _, _ = np.histogram2d(rows, cols, bins=10, range=[[0, 319], [0, 319]])
    expected = rows.size / 100
    chi2 = ((hist - expected) ** 2 / expected).sum()
    assert chi2 < 99 + 5 * math.sqrt(2 * 99)  # df = 99, generous 5-sigma band


# ---------------------------------------------------------------- box entropy

def test_box_entropy_single_color():
    assert box_entropy(gridgen.uniform(n=20), (2, 3), 10) == 0.0


def test_box_entropy_half_split():
    g = gridgen.half_plane(n=20, split=10)
    # box columns 3..12 straddle 7/3 -> entropy of (0.7, 0.3); use an even
    # split at columns 5..14 for exactly ln 2
    val = box_entropy(g, (0, 5), 10)
    assert val == pytest.approx(math.log(2), abs=1e-12)


def test_box_entropy_200_25_split():
    labels = np.zeros((15, 15), np.uint8)
    labels.ravel()[:25] = 1
    val = box_entropy(BasinGrid.from_labels(labels), (0, 0), 15)
    expected = -(200 / 225) * log(200 / 225) - (25 / 225) * log(25 / 225)
    assert val == pytest.approx(expected, abs=1e-12)
    assert val == pytest.approx(0.3488, abs=5e-5)


def test_box_entropy_matches_estimator_path():
    g = gridgen.voronoi(n=40, cells=4, seed=11)
    cfg = EntropyConfig(box_size=9, n_boxes=64, seed=5)
    samples = box_entropy_samples(g, cfg)
    rng = make_rng(cfg.seed)
    rows = rng.integers(0, 40 - 9 + 1, size=64)
    cols = rng.integers(0, 40 - 9 + 1, size=64)
    direct = np.array([box_entropy(g, (r, c), 9) for r, c in zip(rows, cols)])
    assert np.array_equal(samples, direct)


# ---------------------------------------------------------------- fractal dimension

def test_fdim_half_plane():
    g = gridgen.half_plane()
    exact = fractal_dimension_exhaustive(g, FDimConfig())
    assert exact == pytest.approx(1.0, abs=0.05)
    mc = repeat_metric(fractal_dimension, g, FDimConfig(boxes_per_size=35_000),
                       repeats=10, base_seed=0)
    assert mc.mean == pytest.approx(1.0, abs=0.05)


def test_fdim_checkerboard_all_boxes_uncertain():
    g = gridgen.checkerboard()
    fractions = uncertain_fractions(g, FDimConfig(boxes_per_size=2000, seed=0))
    assert all(f == 1.0 for _, f in fractions)
    assert fractal_dimension(g, FDimConfig(boxes_per_size=2000, seed=0)) == 2.0


def test_fdim_uniform_grid_errors():
    with pytest.raises(NoBoundaryDetected):
        fractal_dimension(gridgen.uniform(n=64), FDimConfig())


def test_fdim_single_scale_errors():
    g = gridgen.half_plane(n=3, split=2)
    with pytest.raises(InsufficientScaling):
        fractal_dimension(g, FDimConfig(eps_min=3, eps_max=3, boxes_per_size=50, seed=0))


def test_exhaustive_fractions_equal_bruteforce_oracle():
    g = gridgen.voronoi(n=40, cells=4, seed=8)
    from basinlab.metrics import uncertain_fractions_exact

    for eps, f_exact in uncertain_fractions_exact(g, [3, 6, 9, 12]):
        assert f_exact == oracle_uncertain_fraction(g, eps)


def test_fdim_newton_matches_full_tiling_oracle(newton_cubic_333):
    # deterministic disjoint-tiling box count as an independent dimension
    # estimate; the Monte Carlo corner-sampling estimate must land nearby
    def tiling_fraction(grid, eps):
        a = grid.labels
        h, w = a.shape
        hits = total = 0
        for r in range(0, h - eps + 1, eps):
            for c in range(0, w - eps + 1, eps):
                hits += int(np.unique(a[r:r + eps, c:c + eps]).size >= 2)
                total += 1
        return hits / total

    cfg = FDimConfig(boxes_per_size=200_000, seed=4)
    pts = [(math.log(eps - 1), math.log(tiling_fraction(newton_cubic_333, eps)))
           for eps in cfg.sizes()]
    oracle_dim = 2.0 - linear_fit(pts).slope
    mc_dim = fractal_dimension(newton_cubic_333, cfg)
    assert abs(mc_dim - oracle_dim) <= 0.03


def test_fdim_mc_matches_bruteforce_oracle():
    # 4 sigma: 33 fixed-seed comparisons, so the strict 3 sigma criterion
    # (exercised at full budget in the acceptance suite) would flag ~9% of
    # seed choices by chance alone.
    for seed in (0, 1, 2):
        g = gridgen.voronoi(n=64, cells=4, seed=seed)
        cfg = FDimConfig(boxes_per_size=100_000, seed=seed)
        for eps, f_mc in uncertain_fractions(g, cfg):
            f_oracle = oracle_uncertain_fraction(g, eps)
            se = math.sqrt(max(f_oracle * (1 - f_oracle), 1e-12) / cfg.boxes_per_size)
            assert abs(f_mc - f_oracle) <= max(4 * se, 1e-9), (seed, eps)


# ---------------------------------------------------------------- entropies

def test_basin_entropy_uniform_is_zero():
    assert basin_entropy(gridgen.uniform(), EntropyConfig(n_boxes=500, seed=0)) == 0.0


def test_basin_entropy_iid_noise_binomial_oracle():
    g = gridgen.iid_noise(n=333, labels=2, seed=7)
    sb = basin_entropy(g, EntropyConfig(seed=0))
    area = 225
    expected = sum(
        comb(area, k) * 0.5**area
        * (-(k / area) * log(k / area) - ((area - k) / area) * log((area - k) / area))
        for k in range(1, area)
    )
    assert abs(sb - expected) <= 0.01


def test_basin_entropy_half_plane_exhaustive_oracle():
    g = gridgen.half_plane(n=60, split=30)
    exact = basin_entropy_exact(g, 15)
    assert exact == pytest.approx(oracle_mean_box_entropy(g, 15), abs=1e-12)
    cfg = EntropyConfig(n_boxes=20_000, seed=1)
    samples = box_entropy_samples(g, cfg)
    se = samples.std(ddof=1) / math.sqrt(cfg.n_boxes)
    assert abs(samples.mean() - exact) <= 3 * se


def test_boundary_entropy_half_plane_straddle_oracle():
    g = gridgen.half_plane(n=60, split=30)
    expected = np.mean([
        -(k / 15) * log(k / 15) - ((15 - k) / 15) * log((15 - k) / 15)
        for k in range(1, 15)
    ])
    exact = boundary_basin_entropy_exact(g, 15)
    assert exact == pytest.approx(expected, abs=1e-12)
    assert exact == pytest.approx(oracle_mean_box_entropy(g, 15, boundary_only=True), abs=1e-12)
    mc = boundary_basin_entropy(g, EntropyConfig(n_boxes=50_000, seed=2))
    # straddling boxes have a single-offset entropy distribution; 3 SE bound
    g_sample = box_entropy_samples(g, EntropyConfig(n_boxes=50_000, seed=2))
    positive = g_sample[g_sample > 0]
    se = positive.std(ddof=1) / math.sqrt(positive.size)
    assert abs(mc - exact) <= 3 * se


def test_boundary_entropy_uniform_errors():
    with pytest.raises(NoBoundarySampled):
        boundary_basin_entropy(gridgen.uniform(), EntropyConfig(n_boxes=100, seed=0))


def test_sbb_at_least_sb_same_seed():
    for seed in range(4):
        g = gridgen.voronoi(n=64, cells=3, seed=seed)
        cfg = EntropyConfig(n_boxes=5000, seed=seed)
        assert boundary_basin_entropy(g, cfg) >= basin_entropy(g, cfg)


def test_entropy_upper_bound():
    for seed in range(4):
        g = gridgen.voronoi(n=64, cells=5, seed=10 + seed)
        sb = basin_entropy(g, EntropyConfig(n_boxes=5000, seed=seed))
        assert 0.0 <= sb <= math.log(len(g.label_values()))


# ---------------------------------------------------------------- invariances

def test_exhaustive_metrics_flip_invariant():
    g = gridgen.voronoi(n=48, cells=4, seed=3)
    cfg = FDimConfig(eps_max=15)
    for flipped in (flip_horizontal(g), flip_vertical(g)):
        assert fractal_dimension_exhaustive(flipped, cfg) == \
               fractal_dimension_exhaustive(g, cfg)
        assert basin_entropy_exact(flipped, 15) == basin_entropy_exact(g, 15)
        assert boundary_basin_entropy_exact(flipped, 15) == \
               boundary_basin_entropy_exact(g, 15)


def test_relabel_leaves_mc_metrics_identical():
    g = gridgen.voronoi(n=48, cells=4, seed=6)
    perm = [2, 0, 3, 1]
    h = relabel(g, perm)
    fcfg = FDimConfig(eps_max=15, boxes_per_size=3000, seed=9)
    ecfg = EntropyConfig(n_boxes=3000, seed=9)
    assert fractal_dimension(h, fcfg) == fractal_dimension(g, fcfg)
    assert basin_entropy(h, ecfg) == basin_entropy(g, ecfg)
    assert boundary_basin_entropy(h, ecfg) == boundary_basin_entropy(g, ecfg)
    assert np.array_equal(boundary_mask(h), boundary_mask(g))


# ---------------------------------------------------------------- fit + repeats

def test_linear_fit_examples():
    fit = linear_fit([(0.0, 0.0), (1.0, 1.0)])
    assert (fit.slope, fit.intercept) == (1.0, 0.0)
    fit = linear_fit([(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)])
    assert fit.slope == 0.0
    xs = np.arange(11.0)
    fit = linear_fit(list(zip(xs, 2 * xs + 3)))
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.intercept == pytest.approx(3.0, abs=1e-12)
    assert fit.points_used == 11


def test_linear_fit_degenerate():
    with pytest.raises(DegenerateFit):
        linear_fit([(1.0, 2.0)])
    with pytest.raises(DegenerateFit):
        linear_fit([(1.0, 2.0), (1.0, 3.0)])


def test_repeat_metric_constant_estimator():
    res = repeat_metric(lambda grid, cfg: 1.5, gridgen.uniform(), EntropyConfig(), 10, 0)
    assert res.mean == 1.5 and res.std == 0.0 and res.repeats == 10
    assert res.samples == tuple([1.5] * 10)


def test_repeat_metric_uniform_entropy():
    res = repeat_metric(basin_entropy, gridgen.uniform(), EntropyConfig(n_boxes=200), 10, 3)
    assert res.mean == 0.0 and res.std == 0.0


def test_repeat_metric_uses_sequential_seeds():
    seen = []

    def probe(grid, cfg):
        seen.append(cfg.seed)
        return 0.0

    repeat_metric(probe, gridgen.uniform(), EntropyConfig(), repeats=10, base_seed=40)
    assert seen == list(range(40, 50))


def test_repeat_metric_propagates_errors():
    with pytest.raises(NoBoundaryDetected):
        repeat_metric(fractal_dimension, gridgen.uniform(n=64), FDimConfig(), 10, 0)
