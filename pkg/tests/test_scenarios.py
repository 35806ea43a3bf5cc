import numpy as np
import pytest
from scipy import stats

from fairinfluence.errors import NotPositiveSemiDefiniteError
from fairinfluence.kernels import sigmoid
from fairinfluence.samplers import keyed_rng
from fairinfluence.scenarios import (
    FEATURE_NAMES,
    SCENARIOS,
    ScenarioConfig,
    make_scenario,
    sample_correlated_gaussian,
    scenario_correlation,
)


class TestCorrelationMatrix:
    def test_scenario_a_layout(self):
        corr = scenario_correlation("A", 0.4)
        want = np.array([[1.0, 0.0, 0.4], [0.0, 1.0, 0.0], [0.4, 0.0, 1.0]])
        np.testing.assert_array_equal(corr, want)

    def test_scenario_b_pins_x2_z(self):
        corr = scenario_correlation("B", 0.4)
        assert corr[1, 2] == 0.5
        assert corr[2, 1] == 0.5

    def test_unknown_scenario(self):
        with pytest.raises(ValueError, match="scenario must be one of"):
            scenario_correlation("C", 0.1)


class TestConfig:
    def test_validation(self):
        with pytest.raises(ValueError, match="r must be in"):
            ScenarioConfig("A", -0.1, 100)
        with pytest.raises(ValueError, match="r must be in"):
            ScenarioConfig("A", 1.0, 100)
        with pytest.raises(ValueError, match="n must be >= 1"):
            ScenarioConfig("A", 0.0, 0)

    def test_scenario_b_psd_cap(self):
        # With corr(X2, Zlat) = 0.5 fixed, r above sqrt(3)/2 makes the
        # latent matrix indefinite; the config probe catches it.
        ScenarioConfig("B", 0.86, 100)
        with pytest.raises(NotPositiveSemiDefiniteError):
            ScenarioConfig("B", 0.87, 100)

    def test_scenario_a_admits_high_r(self):
        ScenarioConfig("A", 0.99, 100)


class TestGaussianSampler:
    def test_marginals_and_correlations(self):
        corr = scenario_correlation("B", 0.6)
        draws = sample_correlated_gaussian(corr, 60_000, seed=3)
        got = np.corrcoef(draws.T)
        np.testing.assert_allclose(got, corr, atol=0.02)
        for k in range(3):
            assert abs(draws[:, k].mean()) < 0.02
            assert abs(draws[:, k].std() - 1.0) < 0.02

    def test_marginals_are_standard_normal(self):
        draws = sample_correlated_gaussian(scenario_correlation("A", 0.8), 5_000, seed=1)
        for k in range(3):
            _, p = stats.kstest(draws[:, k], "norm")
            assert p > 1e-3

    def test_pinned_indefinite_matrix_rejected(self):
        corr = np.array([[1.0, 0.9, 0.9], [0.9, 1.0, -0.9], [0.9, -0.9, 1.0]])
        with pytest.raises(NotPositiveSemiDefiniteError, match="min eigenvalue"):
            sample_correlated_gaussian(corr, 10)

    def test_validation(self):
        with pytest.raises(ValueError, match="square"):
            sample_correlated_gaussian(np.ones((2, 3)), 10)
        with pytest.raises(ValueError, match="symmetric"):
            sample_correlated_gaussian(np.array([[1.0, 0.2], [0.3, 1.0]]), 10)
        with pytest.raises(ValueError, match="unit diagonal"):
            sample_correlated_gaussian(np.array([[2.0, 0.0], [0.0, 1.0]]), 10)

    def test_deterministic(self):
        corr = scenario_correlation("A", 0.5)
        a = sample_correlated_gaussian(corr, 50, seed=9)
        b = sample_correlated_gaussian(corr, 50, seed=9)
        assert np.array_equal(a, b)


class TestMakeScenario:
    def test_dataset_layout(self):
        data = make_scenario(ScenarioConfig("A", 0.4, 500, seed=0))
        assert data.names == FEATURE_NAMES
        assert data.protected_idx == frozenset({2})
        assert set(np.unique(data.features[:, 2])) == {0.0, 1.0}
        assert set(np.unique(data.labels)) == {0, 1}
        assert SCENARIOS == ("A", "B")

    def test_x1_z_point_biserial_tracks_r(self):
        # Thresholding Zlat at 0 turns latent correlation r into a
        # point-biserial correlation of r * sqrt(2/pi) (~0.638 here).
        data = make_scenario(ScenarioConfig("A", 0.8, 80_000, seed=2))
        got = np.corrcoef(data.features[:, 0], data.features[:, 2])[0, 1]
        want = 0.8 * np.sqrt(2.0 / np.pi)
        assert got == pytest.approx(want, abs=0.02)

    def test_r_zero_means_independence(self):
        data = make_scenario(ScenarioConfig("A", 0.0, 80_000, seed=3))
        got = np.corrcoef(data.features[:, 0], data.features[:, 2])[0, 1]
        assert abs(got) < 0.02

    def test_labels_follow_logistic_law_a(self):
        cfg = ScenarioConfig("A", 0.4, 40_000, seed=7)
        data = make_scenario(cfg)
        logit = data.features[:, 0] + data.features[:, 1] + data.features[:, 2] + 1.0
        u = keyed_rng(cfg.seed, ("scenario-labels",)).random(cfg.n)
        want = (u < sigmoid(logit)).astype(np.int64)
        assert np.array_equal(data.labels, want)

    def test_labels_ignore_x1_and_z_in_b(self):
        cfg = ScenarioConfig("B", 0.6, 40_000, seed=7)
        data = make_scenario(cfg)
        u = keyed_rng(cfg.seed, ("scenario-labels",)).random(cfg.n)
        want = (u < sigmoid(data.features[:, 1] + 1.0)).astype(np.int64)
        assert np.array_equal(data.labels, want)

    def test_deterministic(self):
        a = make_scenario(ScenarioConfig("A", 0.4, 200, seed=5))
        b = make_scenario(ScenarioConfig("A", 0.4, 200, seed=5))
        assert np.array_equal(a.features, b.features)
        assert np.array_equal(a.labels, b.labels)
