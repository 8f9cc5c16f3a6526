import numpy as np
import pytest
from hypothesis import given, strategies as st

from swrecon.mesh import (
    GridError, bed_stats, build_grid, constant_width, flat_bed, uniform_grid, width_stats,
)


def comparison_grid():
    return build_grid(np.arange(-4, 4) + 0.5, dict(gain=0.25))


def test_two_cells_unit_spacing():
    g = build_grid([0, 1, 2])
    assert g.n_cells == 2
    np.testing.assert_array_equal(g.dx, [1.0, 1.0])


@pytest.mark.parametrize("x", [[0, 1, 1], [0, 2, 1], [3.0]])
def test_rejects_bad_interfaces(x):
    with pytest.raises(GridError):
        build_grid(x)


def test_non_increasing_message():
    with pytest.raises(GridError, match="non-increasing interfaces"):
        build_grid([0, 1, 1])


def test_comparison_grid_has_seven_unit_cells():
    g = comparison_grid()
    assert g.n_cells == 7
    np.testing.assert_array_equal(g.dx, np.ones(7))
    np.testing.assert_array_equal(g.centers, np.arange(-3, 4))


def test_defaults():
    g = uniform_grid(0, 1, 10)
    np.testing.assert_array_equal(g.alpha_minus, 0.75)
    np.testing.assert_array_equal(g.alpha_center, 0.25)
    np.testing.assert_allclose(g.gain, 0.25)
    np.testing.assert_allclose(g.froude, 5.0 ** 1.5)
    np.testing.assert_array_equal(g.K_plus, 100.0)
    assert g.gravity == 9.81


@pytest.mark.parametrize("params, msg", [
    (dict(alpha_minus=1.0), "alpha"),
    (dict(alpha_center=0.0), "alpha"),
    (dict(gain=0.5), "gain"),
    (dict(gain=0.0), "gain"),
    (dict(K_plus=0.0), "K"),
    (dict(froude=-1.0), "Froude"),
    (dict(bogus=1.0), "bogus"),
])
def test_rejects_bad_params(params, msg):
    with pytest.raises(GridError, match=msg):
        uniform_grid(0, 1, 4, params)


def test_flat_bed_has_no_variation():
    g = uniform_grid(0, 1, 8)
    bed = flat_bed(g, 2.0)
    np.testing.assert_array_equal(bed.db_up_geo, 0.0)
    np.testing.assert_array_equal(bed.db_cell, 0.0)


def test_linear_bed_on_comparison_grid():
    g = comparison_grid()
    bed = bed_stats(g.interfaces, g)
    # interior cells: max(1/4, 1/2, 0, 1/4)
    np.testing.assert_allclose(bed.db_up_geo[1:-1], 0.5, rtol=0, atol=1e-15)


def _brute_force_scale(b_cell, db_cell, aL, aC, aR):
    pad = np.concatenate([b_cell[:1], b_cell, b_cell[-1:]])
    out = []
    for j in range(b_cell.size):
        h = db_cell[j] / 2
        terms = [h - aL[j] * (pad[j + 1] - pad[j]), h, h - aC[j] * (pad[j + 2] - pad[j]),
                 h - aR[j] * (pad[j + 2] - pad[j + 1])]
        out.append(max(abs(t) for t in terms))
    return np.array(out)


def test_single_step_bed_matches_brute_force():
    g = uniform_grid(0, 6, 6)
    b = np.zeros(7)
    b[3:] = 1.0
    bed = bed_stats(b, g)
    ref = _brute_force_scale(bed.b_cell, bed.db_cell, g.alpha_left, g.alpha_center, g.alpha_right)
    np.testing.assert_array_equal(bed.db_up_geo, ref)
    assert bed.db_up_geo[2] > 0 and bed.db_up_geo[3] > 0


def test_discontinuous_bed_pair_input():
    g = uniform_grid(0, 3, 3)
    pair = np.array([[0, 0, 0, 1], [0, 0, 1, 1.0]])
    bed = bed_stats(pair, g)
    np.testing.assert_array_equal(bed.b_left, [0, 0, 1])
    np.testing.assert_array_equal(bed.b_right, [0, 0, 1])
    np.testing.assert_array_equal(bed.db_interface, [0, 0, 1, 0])


@given(st.lists(st.floats(-5, 5), min_size=5, max_size=12), st.integers(0, 2**31 - 1))
def test_reflection_symmetry(values, seed):
    rng = np.random.default_rng(seed)
    n = len(values) - 1
    x = np.concatenate([[0.0], np.cumsum(rng.uniform(0.1, 2.0, n))])
    params = dict(alpha_minus=rng.uniform(0.1, 0.9, n + 1), alpha_plus=rng.uniform(0.1, 0.9, n + 1),
                  alpha_center=rng.uniform(0.1, 0.9, n))
    g = build_grid(x, params)
    bed = bed_stats(np.array(values), g)
    g_r = g.reversed()
    bed_r = bed_stats(np.array(values)[::-1], g_r)
    np.testing.assert_allclose(bed_r.db_up_geo, bed.db_up_geo[::-1], rtol=1e-14, atol=1e-14)


def test_width_geometry():
    g = uniform_grid(0, 2, 2)
    w = width_stats([1.0, 2.0, 4.0], g)
    np.testing.assert_array_equal(w.w_cell, [1.5, 3.0])
    np.testing.assert_array_equal(w.w_down, [1.0, 2.0])
    np.testing.assert_array_equal(w.w_gradient, [1.0, 2.0])
    np.testing.assert_array_equal(constant_width(g).w_gradient, 0.0)


def test_width_must_be_positive_in_cell():
    g = uniform_grid(0, 2, 2)
    with pytest.raises(GridError):
        width_stats([0.0, 0.0, 1.0], g)
    with pytest.raises(GridError):
        width_stats([1.0, -1.0, 1.0], g)
