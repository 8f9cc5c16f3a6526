import numpy as np
import pytest
from hypothesis import given, strategies as st

from swrecon.altrecon import AltScheme, bollermann, chertock, kurganov_levy
from swrecon.mesh import bed_stats, uniform_grid
from swrecon.scenarios import comparison_setup

STEP = 1 / 64


def deep_lake(n=20):
    g = uniform_grid(0, 1, n)
    bed = bed_stats(lambda x: 0.1 * np.cos(5 * x), g)
    return g, bed, 5.0 - bed.b_cell


@pytest.mark.parametrize("kind", ["kurganov_levy", "chertock", "bollermann"])
def test_deep_lake_keeps_surface_flat(kind):
    g, bed, h = deep_lake()
    left, right = AltScheme(kind)(g, bed, h)
    np.testing.assert_allclose(left + bed.b_left, 5.0, rtol=0, atol=1e-14)
    np.testing.assert_allclose(right + bed.b_right, 5.0, rtol=0, atol=1e-14)


def test_unknown_scheme():
    with pytest.raises(ValueError):
        AltScheme("roe")


def _edges(fn, h0):
    grid, bed, h = comparison_setup(h0)
    out = fn(grid, bed, h)
    return out[0], out[1]


@pytest.mark.parametrize("index", [2, 3])
def test_threshold_scheme_jumps_at_threshold(index):
    # index 2 is cell -1 (right edge h-_{-1/2}), index 3 is cell 0 (h-_{1/2})
    below = _edges(kurganov_levy, 0.75 - STEP)[1][index]
    above = _edges(kurganov_levy, 0.75 + STEP)[1][index]
    assert abs(above - below) > 4 * STEP


def test_threshold_scheme_edges_nonnegative_and_conservative():
    for h0 in np.linspace(0, 7 / 3, 50):
        left, right = _edges(kurganov_levy, h0)
        grid, bed, h = comparison_setup(h0)
        assert np.all(left >= 0) and np.all(right >= 0)
        np.testing.assert_allclose(0.5 * (left + right), h, rtol=1e-14, atol=1e-14)


def test_chertock_dry_right_edge_at_half():
    assert _edges(chertock, 0.5)[1][3] == pytest.approx(0.0, abs=1e-10)


def test_chertock_jump_past_bed_midpoint():
    # the cell is flattened just below 1/2 and tilted to a dry edge from 1/2 on
    below = _edges(chertock, 0.5 - STEP)[1][3]
    at = _edges(chertock, 0.5)[1][3]
    assert below - at > 4 * STEP


@given(st.floats(0.0, 0.5))
def test_wedge_dry_right_edge(h0):
    assert _edges(bollermann, h0)[1][3] == 0.0


@given(st.floats(1e-6, 0.49))
def test_wedge_volume_conserved(h0):
    grid, bed, h = comparison_setup(h0)
    _, _, wedge = bollermann(grid, bed, h)
    assert wedge.partial[3]
    assert wedge.volume()[3] == pytest.approx(h0 * grid.dx[3], rel=1e-12)
