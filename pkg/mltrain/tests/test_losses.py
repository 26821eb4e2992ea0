import math

import numpy as np
import pytest

from mltrain import EmptyBatch, loss_cce, loss_mse


def test_mse_zero_on_equal():
    assert loss_mse([1.0, 2.0, 3.0], [1.0, 2.0, 3.0]) == 0.0


def test_mse_unit_difference():
    assert loss_mse([2.0, 3.0, 4.0], [1.0, 2.0, 3.0]) == 1.0


def test_mse_half():
    assert loss_mse([0.0, 1.0], [1.0, 1.0]) == 0.5


def test_mse_empty_batch():
    with pytest.raises(EmptyBatch):
        loss_mse([], [])


def test_mse_shape_mismatch():
    with pytest.raises(ValueError):
        loss_mse([1.0], [1.0, 2.0])


def test_cce_perfect_predictions():
    pred = np.array([[1.0, 0.0], [0.0, 1.0]])
    onehot = np.array([[1.0, 0.0], [0.0, 1.0]])
    assert loss_cce(pred, onehot) <= 1e-6  # clipped at 1e-7, not exactly zero


def test_cce_uniform_two_classes():
    pred = np.full((4, 2), 0.5)
    onehot = np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
    assert loss_cce(pred, onehot) == pytest.approx(math.log(2), abs=1e-12)


def test_cce_single_observation():
    assert loss_cce([[0.9, 0.1]], [[1.0, 0.0]]) == pytest.approx(-math.log(0.9), abs=1e-12)
    assert loss_cce([[0.9, 0.1]], [[1.0, 0.0]]) == pytest.approx(0.1054, abs=5e-5)


def test_cce_clips_zero_probability():
    value = loss_cce([[0.0, 1.0]], [[1.0, 0.0]])
    assert value == pytest.approx(-math.log(1e-7), abs=1e-9)


def test_cce_empty_batch():
    with pytest.raises(EmptyBatch):
        loss_cce(np.empty((0, 2)), np.empty((0, 2)))


def test_losses_nonnegative():
    rng = np.random.default_rng(1)
    for _ in range(20):
        pred = rng.random(8)
        target = rng.random(8)
        assert loss_mse(pred, target) >= 0.0
        probs = rng.random((8, 2))
        probs /= probs.sum(axis=1, keepdims=True)
        onehot = np.eye(2)[rng.integers(0, 2, 8)]
        assert loss_cce(probs, onehot) >= 0.0
