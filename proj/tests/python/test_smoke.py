"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import gkps


def test_version():
    assert gkps.__version__ == "0.1.0"


def test_tau_and_threshold():
    assert gkps.tau(2, 1) == pytest.approx(0.4, abs=1e-15)
    assert gkps.r0_threshold(2, 1) == pytest.approx(0.5 * math.log(1.0 / 6.0), abs=1e-14)


def test_gradient_weight():
    assert gkps.f_eval(0.0, 0.0, 0.0, 2, 1) == 1.0
    assert gkps.f_eval(0.0, 1.0, 1.0, 2, 1) == pytest.approx(2.0, abs=1e-15)
    assert gkps.f_r_eval(0.0, 0.0, 0.0, 2, 1) == pytest.approx(0.4, abs=1e-15)


def test_clifford_reference():
    ref = gkps.clifford_reference(2, 1, math.log(2.0))
    assert ref["K"] == pytest.approx(0.5, abs=1e-14)
    assert sorted(ref["principal_curvatures"]) == pytest.approx([-0.5, -0.5, 2.0], abs=1e-12)


def zero_jet(m, n):
    return dict(u=0.0, grad_x=np.zeros(m), grad_y=np.zeros(n),
                hess_xx=np.zeros((m, m)), hess_xy=np.zeros((m, n)),
                hess_yy=np.zeros((n, n)))


def test_curvature_of_the_flat_reference():
    assert gkps.curvature_k(**zero_jet(2, 1)) == pytest.approx(1.0, abs=1e-13)
    assert gkps.f_operator(**zero_jet(2, 1)) == pytest.approx(1.0, abs=1e-12)
    M = gkps.mu_matrix(**zero_jet(2, 1))
    assert np.allclose(M, np.diag([-1.0, -1.0, 1.0]))


def test_embedding_norm():
    gamma = np.array([0.6, 0.8, 0.0])
    rho = np.array([0.0, 1.0])
    X = gkps.embed_point(gamma, rho, 0.7)
    assert np.linalg.norm(X) == pytest.approx(1.0, abs=1e-14)


def test_second_fundamental_consistency():
    rng = np.random.default_rng(3)
    for _ in range(10):
        jet = dict(u=rng.uniform(-1, 1),
                   grad_x=rng.uniform(-1, 1, 2), grad_y=rng.uniform(-1, 1, 1),
                   hess_xx=np.zeros((2, 2)), hess_xy=rng.uniform(-1, 1, (2, 1)),
                   hess_yy=rng.uniform(-1, 1, (1, 1)))
        s = rng.uniform(-1, 1, (2, 2))
        jet["hess_xx"] = s + s.T
        gs = gkps.second_fundamental(**jet)
        K = gkps.curvature_k(**jet)
        assert gs["K"] == pytest.approx(K, rel=1e-9, abs=1e-12)


def test_extrinsic_oracle():
    rep = gkps.extrinsic_oracle(**zero_jet(2, 1), fd_step=1e-3)
    assert rep["rel_error"] < 1e-6


def test_find_abf():
    out = gkps.find_abf(2, 1, 1.0471975511965976, k_kind="constant", k_value=0.5)
    assert out["certificate"]["valid"]
    assert out["certificate"]["sup_psi"] <= out["certificate"]["r0"]


def test_solve_roundtrip():
    config = {
        "dims": {"m": 2, "n": 1},
        "cap": {"theta_max": 1.0471975511965976},
        "K": {"kind": "scaled_subsolution", "value": 0.5},
        "boundary": {"kind": "abf_auto", "E": 0.25},
        "grid": {"backend": "radial", "nr": 65},
        "solver": {"newton_tol": 1e-10},
    }
    report = gkps.solve(config)
    assert report["status"] == "converged"
    assert report["final_residual"] <= 1e-10
    assert report["diagnostics"]["flags"]["all"]
    u = np.array(report["u"])
    assert u.shape == (65,)
    assert report["diagnostics"]["min_eig_M"] > 0.0


def test_solve_rejects_swapped_dimensions():
    config = {
        "dims": {"m": 1, "n": 2},
        "cap": {"theta_max": 1.0},
        "K": {"kind": "constant", "value": 0.5},
        "boundary": {"kind": "abf_auto"},
        "grid": {"backend": "radial", "nr": 33},
    }
    with pytest.raises(Exception, match="v = -u"):
        gkps.solve(config)
