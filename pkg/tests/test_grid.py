import numpy as np
import pytest

from basinlab import BasinGrid, Region, UNRESOLVED_ID, flip_horizontal, flip_vertical, relabel
from basinlab.errors import InvalidPermutation

import gridgen


def test_flip_horizontal_reverses_columns():
    g = BasinGrid.from_labels(np.array([[0, 1, 2]]))
    assert flip_horizontal(g).labels.tolist() == [[2, 1, 0]]


def test_flip_vertical_reverses_rows():
    g = BasinGrid.from_labels(np.array([[0], [1], [2]]))
    assert flip_vertical(g).labels.tolist() == [[2], [1], [0]]


@pytest.mark.parametrize("flip", [flip_horizontal, flip_vertical])
def test_flip_uniform_grid_is_identity(flip):
    g = gridgen.uniform(n=8, value=3)
    assert flip(g) == g


@pytest.mark.parametrize("flip", [flip_horizontal, flip_vertical])
def test_flip_is_involution(flip):
    g = gridgen.voronoi(n=32, cells=4, seed=5)
    assert flip(flip(g)) == g


def test_flip_involution_on_generated_basin(duffing_100):
    assert flip_horizontal(flip_horizontal(duffing_100)) == duffing_100
    assert flip_vertical(flip_vertical(duffing_100)) == duffing_100


def test_flips_commute():
    g = gridgen.voronoi(n=24, cells=3, seed=9)
    assert flip_horizontal(flip_vertical(g)) == flip_vertical(flip_horizontal(g))


def test_flips_preserve_label_multiset():
    g = gridgen.voronoi(n=32, cells=5, seed=2)
    for flipped in (flip_horizontal(g), flip_vertical(g)):
        assert flipped.shape == g.shape
        assert flipped.num_labels == g.num_labels
        assert np.array_equal(
            np.bincount(flipped.labels.ravel(), minlength=256),
            np.bincount(g.labels.ravel(), minlength=256),
        )


def test_relabel_swap():
    g = BasinGrid.from_labels(np.array([[0, 1, 0]]))
    assert relabel(g, [1, 0]).labels.tolist() == [[1, 0, 1]]


def test_relabel_identity():
    g = gridgen.voronoi(n=16, cells=3, seed=1)
    assert relabel(g, [0, 1, 2]) == g


def test_relabel_involution_restores():
    g = gridgen.voronoi(n=16, cells=4, seed=3)
    perm = [1, 0, 3, 2]
    assert relabel(relabel(g, perm), perm) == g


def test_relabel_permutes_counts():
    g = BasinGrid.from_labels(np.array([[0, 0, 1, 2]]))
    out = relabel(g, [2, 0, 1])
    counts = np.bincount(out.labels.ravel(), minlength=3)
    assert counts.tolist() == [1, 1, 2]
    assert out.num_labels == g.num_labels


def test_relabel_keeps_unresolved():
    labels = np.array([[0, 1, UNRESOLVED_ID]])
    out = relabel(BasinGrid.from_labels(labels), [1, 0])
    assert out.labels.tolist() == [[1, 0, UNRESOLVED_ID]]


@pytest.mark.parametrize("perm", [[0, 0, 1], [0, 1], [0, 1, 3]])
def test_relabel_rejects_non_bijections(perm):
    g = gridgen.stripes(n=9, k=3)
    with pytest.raises(InvalidPermutation):
        relabel(g, perm)


def test_labels_are_immutable():
    g = gridgen.uniform(n=4)
    with pytest.raises(ValueError):
        g.labels[0, 0] = 1


def test_from_labels_infers_num_labels():
    g = BasinGrid.from_labels(np.array([[0, 2, UNRESOLVED_ID]]))
    assert g.num_labels == 3
    assert BasinGrid.from_labels(np.full((2, 2), UNRESOLVED_ID)).num_labels == 1


def test_grid_validation():
    with pytest.raises(ValueError):
        BasinGrid(np.zeros((2, 2), np.uint8), 0)
    with pytest.raises(ValueError):
        BasinGrid(np.zeros(4, np.uint8), 1)


def test_unresolved_fraction():
    labels = np.array([[0, UNRESOLVED_ID], [1, 1]])
    assert BasinGrid.from_labels(labels).unresolved_fraction() == 0.25


def test_region_validation_and_centers():
    with pytest.raises(ValueError):
        Region(1.0, 0.0, 0.0, 1.0, 10)
    with pytest.raises(ValueError):
        Region(0.0, 1.0, 0.0, 1.0, 1)
    r = Region(0.0, 1.0, -1.0, 1.0, 4)
    assert np.allclose(r.x_centers(), [0.125, 0.375, 0.625, 0.875])
    assert np.allclose(r.y_centers(), [-0.75, -0.25, 0.25, 0.75])
