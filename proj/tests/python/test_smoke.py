import math

import numpy as np
import pytest

import stein_intensity as si


def test_window_volume():
    assert si.window_volume(2) == pytest.approx(math.pi)
    assert si.window_volume(3, 2.0) == pytest.approx(4.0 / 3.0 * math.pi * 8.0)


def test_sampling_is_seeded():
    a = si.sample_pattern(2, 10.0, seed=5)
    b = si.sample_pattern(2, 10.0, seed=5)
    assert a.shape[1] == 2
    np.testing.assert_array_equal(a, b)
    assert np.all((a**2).sum(axis=1) <= 1.0)


def test_estimators():
    pts = si.sample_pattern(2, 10.0, seed=3)
    assert si.mle(pts) == pytest.approx(len(pts) / math.pi)
    assert si.stein_estimate(pts, 20, 0.0, 3.0) == si.mle(pts)
    empty = np.zeros((0, 1))
    assert si.stein_estimate(empty, 11, -0.8, 4.0) == 0.0
    assert si.pr_estimate([1.0], 1.0) == pytest.approx(0.5 + 1.0 / 3.0)
    with pytest.raises(ValueError):
        si.mle(np.array([[2.0, 0.0]]))


def test_phi_and_kernel():
    v, d1, d2 = si.phi(1.0, -3.0, 3.0)
    assert v == 1.0 and d1 == 0.0
    t = 0.4
    g, k = 0.5, 2.0
    assert si.gain_kernel(t, g, k) == pytest.approx(2 * g * t * (1 - 2 * t - 2 * g * t * (1 - t) ** 2))
    with pytest.raises(ValueError):
        si.phi(0.5, -3.0, 1.5)


def test_gain_and_gamma_star():
    gs = si.gamma_star(10.0, 2, 34, 2.0, samples=20000, seed=2)
    assert gs["gamma"] < 0 and not gs["degenerate"]
    g = si.expected_gain(10.0, 2, 34, gs["gamma"], 2.0, samples=20000, seed=2)
    assert g["value"] > 0 and g["n_samples"] == 20000


def test_optimize():
    r = si.optimize(5.0, 1, samples=5000, seed=1)
    assert r["k_lo"] <= r["k"] <= r["k_hi"]
    assert 2.0 <= r["kappa"] <= 12.0
    assert r["objective"]["value"] > 0


def test_selftest_and_cli(tmp_path):
    assert all(ok for _, ok, _ in si.selftest(4))
    out = tmp_path / "gain.csv"
    args = ["gain", "--theta", "10", "--d", "2", "--k", "34", "--gamma", "-14.88", "--kappa", "2",
            "--samples", "5000", "--out", str(out)]
    assert si.run_cli(args) == 0
    assert out.read_text().startswith("gain,std_error,n_samples\n")
    assert si.run_cli(["nonsense"]) == 1
