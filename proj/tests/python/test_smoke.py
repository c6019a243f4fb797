import math

import numpy as np
import pytest

import goalstep as gs


def test_check_battery():
    assert gs.check()


def test_adaptive_run_reaches_end():
    r = gs.adaptive_solve("toy", tau=1e-6, density="u2")
    assert r.ok
    assert r.t_final == 2.0
    assert r.n_steps == len(r.steps)
    assert r.e_J < 1e-5
    assert r.J_h == pytest.approx(gs.toy_exact_qoi(-1.0, "u2"), rel=1e-5)


def test_sweep_slope():
    out = gs.sweep("toy", [1e-4, 1e-5, 1e-6, 1e-7], density="u2")
    assert [row["tau"] for row in out["rows"]] == [1e-4, 1e-5, 1e-6, 1e-7]
    assert out["slope_tau"] == pytest.approx(1.0, abs=0.15)


def test_rk4_pair():
    r = gs.adaptive_solve("toy", tau=1e-8, density="t*u1", scheme="rk4")
    assert r.ok and r.e_J < 1e-7


def test_seminorm_example():
    a = np.array([[2.0, 1.0], [0.0, 4.0]])
    x = np.array([1.0, 2.0])
    w = np.array([1.0, 0.0])
    assert gs.lipschitz_seminorm(a, w) == 2.0
    assert gs.seminorm(x, w) == 1.0
    assert gs.seminorm(a @ x, w) == 4.0


def test_controller():
    cfg = gs.ControllerConfig()
    cfg.tau = 1e-6
    cfg.p_hat = 1
    assert gs.deadbeat_next_step(0.1, 4e-6, cfg) == pytest.approx(0.05)
    assert gs.deadbeat_next_step(0.1, 0.0, cfg) == pytest.approx(0.3)
    assert gs.initial_step(1e-6, 1) == pytest.approx(1e-3)


def test_dense_weights():
    rows = gs.order_conditions(np.array([5.0, 4.0, 4.0, -1.0]) / 24.0, gamma=0.5, up_to_order=3)
    assert all(passed for _, _, passed in rows)


def test_dwr():
    out = gs.dwr_loop(1e-6, np.array([1.0, 0.0]))
    assert out["converged"]
    assert out["cells"][:2] == [10, 18]
    assert abs(out["J_h"] - gs.toy_exact_qoi(-1.0, "u1")) <= 10 * out["eta"]


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        gs.adaptive_solve("nosuch")
    with pytest.raises(ValueError):
        gs.sweep("toy", [1e-4])
    assert math.isfinite(gs.fit_observed_order([1, 2, 4], [1, 4, 16]))
