import numpy as np
import pytest

from fairinfluence.reports import (
    FAIRNESS_HEADER,
    INFLUENCE_HEADER,
    SWEEP_HEADER,
    FairnessRow,
    InfluenceRow,
    SweepRow,
    bootstrap_ci,
    write_fairness_csv,
    write_influence_csv,
    write_sweep_csv,
)


class TestBootstrap:
    def test_deterministic(self):
        vals = np.random.default_rng(0).normal(size=40)
        assert bootstrap_ci(vals, seed=7) == bootstrap_ci(vals, seed=7)
        assert bootstrap_ci(vals, seed=7) != bootstrap_ci(vals, seed=8)

    def test_brackets_the_mean_usually(self):
        rng = np.random.default_rng(1)
        hits = 0
        for trial in range(40):
            vals = rng.normal(loc=2.0, size=60)
            low, high = bootstrap_ci(vals, level=0.95, seed=trial)
            assert low <= high
            hits += low <= 2.0 <= high
        assert hits >= 32  # ~95% nominal coverage, generous slack

    def test_interval_tightens_with_level(self):
        vals = np.random.default_rng(2).normal(size=100)
        low50, high50 = bootstrap_ci(vals, level=0.5, seed=0)
        low99, high99 = bootstrap_ci(vals, level=0.99, seed=0)
        assert high50 - low50 < high99 - low99

    def test_constant_values_collapse(self):
        low, high = bootstrap_ci([3.0, 3.0, 3.0], seed=0)
        assert low == high == 3.0

    def test_validation(self):
        with pytest.raises(ValueError, match="at least 2"):
            bootstrap_ci([1.0])
        with pytest.raises(ValueError, match="level"):
            bootstrap_ci([1.0, 2.0], level=1.0)
        with pytest.raises(ValueError, match="resamples"):
            bootstrap_ci([1.0, 2.0], resamples=0)


class TestCsvWriters:
    def test_influence_csv(self, tmp_path):
        path = tmp_path / "influence.csv"
        rows = [
            InfluenceRow("mim", "X1", "shap", 0.125, 0.001, 256),
            InfluenceRow("mim", "Z", "shap", 0.0, 0.0, 256),
        ]
        write_influence_csv(path, rows)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(INFLUENCE_HEADER)
        assert lines[1] == "mim,X1,shap,0.125,0.001,256"
        assert lines[2] == "mim,Z,shap,0,0,256"

    def test_fairness_csv_empty_cells_for_undefined(self, tmp_path):
        path = tmp_path / "fairness.csv"
        rows = [
            FairnessRow("trad_full", "demographic_disparity", 0.25, 0.2, 0.3),
            FairnessRow("trad_full", "disparate_impact", None),
        ]
        write_fairness_csv(path, rows)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(FAIRNESS_HEADER)
        assert lines[1] == "trad_full,demographic_disparity,0.25,0.2,0.3"
        assert lines[2] == "trad_full,disparate_impact,,,"

    def test_sweep_csv(self, tmp_path):
        path = tmp_path / "sweep.csv"
        rows = [
            SweepRow("A", 0.4, "mim", "shap", "X1", 0.5, 0.4, 0.6, 30),
            SweepRow("A", 0.4, "mim", "disparate_impact", "", None, None, None, 0),
        ]
        write_sweep_csv(path, rows)
        lines = path.read_text().splitlines()
        assert lines[0] == ",".join(SWEEP_HEADER)
        assert lines[1] == "A,0.4,mim,shap,X1,0.5,0.4,0.6,30"
        assert lines[2] == "A,0.4,mim,disparate_impact,,,,,0"

    def test_twelve_significant_digits(self, tmp_path):
        path = tmp_path / "influence.csv"
        value = 1.0 / 3.0
        write_influence_csv(path, [InfluenceRow("m", "f", "mde", value, 0.0, 1)])
        cell = path.read_text().splitlines()[1].split(",")[3]
        assert cell == format(value, ".12g")
        assert float(cell) == pytest.approx(value, rel=1e-11)

    def test_unix_line_endings(self, tmp_path):
        path = tmp_path / "influence.csv"
        write_influence_csv(path, [InfluenceRow("m", "f", "mde", 1.0, 0.0, 1)])
        raw = path.read_bytes()
        assert b"\r" not in raw
        assert raw.endswith(b"\n")

    def test_byte_identical_rewrites(self, tmp_path):
        rows = [InfluenceRow("m", "f", "mde", np.pi, np.e / 1000, 77)]
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_influence_csv(p1, rows)
        write_influence_csv(p2, rows)
        assert p1.read_bytes() == p2.read_bytes()
