import numpy as np
import pytest
from hypothesis import given, strategies as st

from helpers import random_bed, random_grid
from swrecon.mesh import bed_stats, constant_width, flat_bed, uniform_grid, width_stats
from swrecon.solver import (
    SolverError, SystemKind, bed_source, numerical_flux, physical_flux, rhs, settling_sink,
)

PLAIN = SystemKind("plain")
PARTICLE = SystemKind("particle", g_particle=2.0, g_ambient=0.5)
seeds = st.integers(0, 2**32 - 1)


@pytest.mark.parametrize("Q, expected", [((1, 0), (0, 0.5)), ((1, 1), (1, 1.5)), ((0, 0), (0, 0))])
def test_physical_flux(Q, expected):
    np.testing.assert_array_equal(physical_flux(PLAIN, np.array(Q, float), gravity=1.0), expected)


@given(st.floats(0, 10), st.floats(-10, 10), st.floats(0, 1))
def test_consistency(h, u, phi):
    for system, Q in ((PLAIN, [h, h * u]), (PARTICLE, [h, phi * h, h * u])):
        F, _, _ = numerical_flux(system, np.array(Q), np.array(Q), gravity=9.81)
        np.testing.assert_array_equal(F, physical_flux(system, np.array(Q), gravity=9.81))


def test_dry_pair():
    F, am, ap = numerical_flux(PLAIN, np.zeros(2), np.zeros(2))
    np.testing.assert_array_equal(F, 0.0)
    assert am == 0.0 and ap == 0.0


def test_still_water_pair():
    F, am, ap = numerical_flux(PLAIN, np.array([1.0, 0.0]), np.array([1.0, 0.0]), gravity=1.0)
    np.testing.assert_array_equal(F, [0.0, 0.5])
    assert (am, ap) == (-1.0, 1.0)


def test_flat_bed_source_vanishes():
    g = uniform_grid(0, 1, 5)
    s = bed_source(SystemKind("width"), np.ones(5), 2 * np.ones(5), flat_bed(g), g.dx, constant_width(g, 3))
    np.testing.assert_array_equal(s, 0.0)


@pytest.mark.parametrize("Q, vs, expected", [
    ([[1.0], [2.0], [0.0]], 0.0, 0.0), ([[1.0], [2.0], [0.0]], 0.5, -1.0), ([[0.0], [0.0], [0.0]], 1.0, 0.0),
])
def test_settling_sink(Q, vs, expected):
    assert settling_sink(np.array(Q), vs)[0] == expected


def lake(system, n=50, phi=0.4):
    g = uniform_grid(0, 1, n)
    bed = bed_stats(lambda x: 0.3 * np.exp(-((x - 0.5) / 0.1) ** 2), g)
    h = 1.0 - bed.b_cell
    if system.kind == "particle":
        Q = np.vstack([h, phi * h, np.zeros(n)])
    else:
        Q = np.vstack([h, np.zeros(n)])
    return g, bed, Q


@pytest.mark.parametrize("system", [PLAIN, PARTICLE], ids=["plain", "particle"])
@pytest.mark.parametrize("boundary", ["wall", "outflow"])
def test_lake_at_rest_balance(system, boundary):
    g, bed, Q = lake(system)
    dQ, _ = rhs(system, g, bed, None, Q, boundary)
    assert np.max(np.abs(dQ)) <= 1e-13


@pytest.mark.parametrize("system", [PLAIN, PARTICLE, SystemKind("width")], ids=["plain", "particle", "width"])
def test_uniform_state_is_steady(system):
    g = uniform_grid(0, 1, 10)
    Q = np.vstack([np.full(10, 0.7)] * (system.n_fields - 1) + [np.full(10, 0.2)])
    w = constant_width(g, 2.0) if system.kind == "width" else None
    dQ, _ = rhs(system, g, flat_bed(g), w, Q, "outflow")
    np.testing.assert_array_equal(dQ, 0.0)


def test_hump_conserves_mass_with_walls():
    g = uniform_grid(-1, 1, 40)
    h = 1.0 + 0.5 * np.exp(-(g.centers / 0.2) ** 2)
    dQ, _ = rhs(PLAIN, g, flat_bed(g), None, np.vstack([h, np.zeros(40)]), "wall")
    assert abs(np.sum(dQ[0] * g.dx)) <= 1e-13


@given(seeds)
def test_discrete_conservation(seed):
    rng = np.random.default_rng(seed)
    g = random_grid(rng, 20)
    bed = random_bed(rng, g)
    h = rng.uniform(0, 2, 20) * (rng.random(20) > 0.2)
    Q = np.vstack([h, rng.uniform(0, 1, 20) * h, rng.normal(0, 1, 20) * h])
    system = SystemKind("particle", settling=0.3)
    dQ, rep = rhs(system, g, bed, None, Q, "outflow")
    F, S = rep.interface_flux, rep.cell_source
    total = np.sum(dQ * g.dx, axis=1)
    expected = -(F[:, -1] - F[:, 0]) + np.sum(S * g.dx, axis=1)
    scale = np.abs(F).max() + np.abs(S * g.dx).sum() + 1e-300
    np.testing.assert_allclose(total, expected, rtol=0, atol=1e-12 * scale)


def test_width_lake_second_order_balance_is_small():
    g = uniform_grid(0, 1, 100)
    bed = bed_stats(lambda x: 0.2 * x, g)
    w = width_stats(lambda x: 1.0 + x, g)
    A = (1.0 - bed.b_cell) * w.w_cell
    dQ, _ = rhs(SystemKind("width"), g, bed, w, np.vstack([A, np.zeros(100)]), "wall")
    assert np.max(np.abs(dQ)) < 1e-2


def test_bad_shapes_and_kinds():
    g = uniform_grid(0, 1, 4)
    with pytest.raises(ValueError):
        rhs(PLAIN, g, flat_bed(g), None, np.zeros((3, 4)))
    with pytest.raises(ValueError):
        SystemKind("euler")
    with pytest.raises(ValueError):
        SystemKind("particle", g_particle=0.0)
    with pytest.raises(ValueError):
        rhs(SystemKind("width"), g, flat_bed(g), None, np.ones((2, 4)))


def test_solver_error_message():
    err = SolverError("non-finite state", cell=3, time=0.25)
    assert "cell 3" in str(err) and "t=0.25" in str(err)
    assert err.cell == 3
