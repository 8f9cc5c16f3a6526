import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from swrecon import DepthReconstructor, ShallowWaterSolver
from swrecon.mesh import bed_stats, build_grid
from swrecon.wbrecon import reconstruct_depth


def test_transform_matches_function():
    x = np.linspace(0, 1, 11)
    b = 0.2 * x ** 2
    h = np.linspace(0.5, 1.0, 10)
    edges = DepthReconstructor().fit(x, bed=b).transform(h)
    g = build_grid(x)
    ref = reconstruct_depth(g, bed_stats(b, g), h)
    np.testing.assert_array_equal(edges, np.column_stack([ref.h_left, ref.h_right]))


def test_clone_and_params():
    est = DepthReconstructor(gain=0.1, K=50.0)
    c = clone(est)
    assert c.get_params()["gain"] == 0.1 and c.get_params()["K"] == 50.0


def test_not_fitted():
    with pytest.raises(NotFittedError):
        DepthReconstructor().transform(np.ones(3))


@pytest.mark.parametrize("h", [np.ones(4), -np.ones(10), np.full(10, np.nan)])
def test_bad_depths(h):
    est = DepthReconstructor().fit(np.linspace(0, 1, 11))
    with pytest.raises(ValueError):
        est.transform(h)


def test_bad_interfaces():
    with pytest.raises(ValueError):
        DepthReconstructor().fit([0.0, 1.0, 0.5])


def test_solver_predict_lake_at_rest():
    x = np.linspace(0, 1, 41)
    b = 0.3 * np.exp(-((x - 0.5) / 0.1) ** 2)
    est = ShallowWaterSolver().fit(x, bed=b)
    bc = 0.5 * (b[1:] + b[:-1])
    Q0 = np.vstack([1.0 - bc, np.zeros(40)])
    Q = est.predict(Q0, n_steps=50)
    np.testing.assert_allclose(Q, Q0, atol=1e-13)
    assert est.result_.steps == 50


def test_solver_width_system():
    x = np.linspace(0, 1, 21)
    est = ShallowWaterSolver(system="width").fit(x, width=1 + x)
    Q = est.predict(np.vstack([np.full(20, 1.0), np.zeros(20)]), t_end=0.01)
    assert Q.shape == (2, 20) and np.all(Q[0] >= 0)


def test_solver_rejects_negative_state():
    est = ShallowWaterSolver().fit(np.linspace(0, 1, 5))
    with pytest.raises(ValueError):
        est.predict(np.array([[1.0, -1.0, 1.0, 1.0], [0.0] * 4]), n_steps=1)
