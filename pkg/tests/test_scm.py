import numpy as np
import pytest

from fairinfluence.scm import (
    FEATURE_NAMES,
    PROTECTED_IDX,
    LinearSCM,
    MseGapResult,
    build_mim_predictor,
    build_pscf_predictor,
    delta,
    mse_gap_check,
    simulate_scm,
)

from . import oracles

_DEMO = dict(
    theta_m=(0.0, 0.3, 1.0),
    theta_l=(0.0, 0.2, 0.5, 0.4),
    theta_y=(0.0, 0.5, 0.5, 1.0, 0.7),
)


def _scm(noise=(0.3, 0.3, 0.3), z_prob=0.5):
    return LinearSCM(noise_std=noise, z_prob=z_prob, **_DEMO)


class TestLinearSCM:
    def test_layout_constants(self):
        assert FEATURE_NAMES == ("C", "M", "L", "Z")
        assert PROTECTED_IDX == 3

    def test_validation(self):
        with pytest.raises(ValueError, match="theta_m"):
            LinearSCM(theta_m=(0.0, 1.0), theta_l=(0,) * 4, theta_y=(0,) * 5)
        with pytest.raises(ValueError, match="noise_std"):
            _scm(noise=(-0.1, 0.0, 0.0))
        with pytest.raises(ValueError, match="z_prob"):
            _scm(z_prob=1.5)
        with pytest.raises(ValueError, match="finite"):
            LinearSCM(theta_m=(0.0, np.inf, 0.0), theta_l=(0,) * 4, theta_y=(0,) * 5)


class TestSimulate:
    def test_deterministic_and_readonly(self):
        a = simulate_scm(_scm(), 100, seed=4)
        b = simulate_scm(_scm(), 100, seed=4)
        assert np.array_equal(a.features, b.features)
        assert np.array_equal(a.y, b.y)
        with pytest.raises(ValueError):
            a.features[0, 0] = 1.0
        with pytest.raises(ValueError):
            a.y[0] = 1.0

    def test_structural_equations_at_zero_noise(self):
        scm = _scm(noise=(0.0, 0.0, 0.0))
        s = simulate_scm(scm, 500, seed=1)
        t_m, t_l, t_y = scm.theta_m, scm.theta_l, scm.theta_y
        m_want = t_m[0] + t_m[1] * s.z + t_m[2] * s.c
        l_want = t_l[0] + t_l[1] * s.z + t_l[2] * s.c + t_l[3] * s.m
        y_want = t_y[0] + t_y[1] * s.z + t_y[2] * s.c + t_y[3] * s.m + t_y[4] * s.l
        np.testing.assert_allclose(s.m, m_want, atol=1e-15)
        np.testing.assert_allclose(s.l, l_want, atol=1e-15)
        np.testing.assert_allclose(s.y, y_want, atol=1e-14)

    def test_z_is_bernoulli(self):
        s = simulate_scm(_scm(z_prob=0.3), 20_000, seed=2)
        assert set(np.unique(s.z)) <= {0.0, 1.0}
        assert abs(float(np.mean(s.z)) - 0.3) < 0.02

    def test_n_validated(self):
        with pytest.raises(ValueError, match="n must be >= 1"):
            simulate_scm(_scm(), 0)


class TestMimPredictor:
    def test_matches_closed_form_coefficients(self):
        scm = _scm()
        w, bias = oracles.mim_affine_coefficients(scm)
        rows = np.random.default_rng(0).normal(size=(50, 4))
        pred = build_mim_predictor(scm).predict(rows)
        np.testing.assert_allclose(pred, rows @ w + bias, atol=1e-12)

    def test_ignores_observed_l(self):
        scm = _scm()
        pred = build_mim_predictor(scm)
        rows = np.random.default_rng(1).normal(size=(10, 4))
        bumped = rows.copy()
        bumped[:, 2] += 100.0
        assert np.array_equal(pred.predict(rows), pred.predict(bumped))

    def test_explicit_z_mean_overrides_prior(self):
        scm = _scm(z_prob=0.5)
        rows = np.random.default_rng(2).normal(size=(5, 4))
        at_prior = build_mim_predictor(scm).predict(rows)
        at_custom = build_mim_predictor(scm, z_mean=0.9).predict(rows)
        assert not np.array_equal(at_prior, at_custom)


class TestDelta:
    def test_demo_value_is_pinned(self):
        assert delta(_scm()) == pytest.approx(0.442, abs=1e-15)

    def test_formula(self):
        scm = _scm(z_prob=0.25)
        t_m, t_l, t_y = scm.theta_m, scm.theta_l, scm.theta_y
        want = 0.25 * (t_y[1] + t_y[3] * t_m[1] + t_y[4] * t_l[3] * t_m[1])
        assert delta(scm) == pytest.approx(want, abs=1e-15)

    def test_pscf_is_mim_minus_delta(self):
        scm = _scm()
        rows = np.random.default_rng(3).normal(size=(20, 4))
        gap = build_mim_predictor(scm).predict(rows) - build_pscf_predictor(scm).predict(rows)
        np.testing.assert_allclose(gap, delta(scm), atol=1e-14)


class TestMseGap:
    def test_identity_within_monte_carlo_error(self):
        res = mse_gap_check(_scm(), n=20_000, seed=0)
        assert isinstance(res, MseGapResult)
        assert res.residual <= 4 * res.stderr_diff
        assert res.mse_pscf > res.mse_mim

    def test_exact_at_zero_noise(self):
        res = mse_gap_check(_scm(noise=(0.0, 0.0, 0.0)), n=5_000, seed=1)
        assert res.residual <= 1e-10

    def test_residual_is_gap_minus_delta_sq(self):
        res = mse_gap_check(_scm(), n=5_000, seed=2)
        assert res.residual == abs(res.mse_pscf - res.mse_mim - res.delta_sq)

    def test_small_n_rejected(self):
        with pytest.raises(ValueError, match="n must be >= 1000"):
            mse_gap_check(_scm(), n=100)
