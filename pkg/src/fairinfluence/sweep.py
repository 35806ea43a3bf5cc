"""Scenario sweeps and single-model audits.

A sweep trains every requested method on fresh data for each (r, trial)
pair, scores accuracy, fairness, and global influence on the held-out
20%, and aggregates across trials into one CSV row per
(r, method, metric, feature) with a bootstrap CI. Per-trial seeds are
spawned from the sweep seed, so a fixed spec reproduces the output file
byte-for-byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import fairness
from .data import Dataset, load_dataset_csv, read_schema, train_test_split
from .errors import ConfigError, UndefinedMetricError
from .fairness import GroupedOutcomes
from .influence import InfluenceMeasure, global_influence
from .mixtures import MixtureModel, mim
from .models import LinearLogisticModel, Predictor
from .opt import OptConfig, opt_fit
from .reports import (
    FairnessRow,
    InfluenceRow,
    SweepRow,
    bootstrap_ci,
    write_fairness_csv,
    write_influence_csv,
    write_sweep_csv,
)
from .scenarios import ScenarioConfig, make_scenario
from .serialize import LINEAR_TYPE, MIXTURE_TYPE, load_model
from .training import TrainConfig, evaluate, train_logistic

METHODS = ("trad_full", "trad_wo_z", "mim", "opt_mde", "opt_shap")
INFLUENCE_MEASURES = (InfluenceMeasure.SHAP, InfluenceMeasure.MDE)
FAIRNESS_METRICS = (
    "demographic_disparity",
    "disparate_impact",
    "equal_opportunity_diff",
    "equalized_odds_gap",
    "accuracy_disparity",
)

# audits on datasets up to this many rows enumerate influence exactly
_EXHAUSTIVE_AUDIT_ROWS = 512


@dataclass(frozen=True)
class SweepSpec:
    scenario: str
    r_grid: tuple[float, ...]
    trials: int = 30
    n_per_trial: int = 10_000
    methods: tuple[str, ...] = ("trad_full", "trad_wo_z", "mim")
    seed: int = 0
    n_eval: int | None = 256
    n_inner: int | None = 128
    test_fraction: float = 0.2
    learning_rate: float = 0.05
    epochs: int = 300
    opt_epochs: int = 150
    opt_mc_samples: int = 128
    bootstrap_resamples: int = 1000

    def __post_init__(self) -> None:
        object.__setattr__(self, "r_grid", tuple(float(r) for r in self.r_grid))
        object.__setattr__(self, "methods", tuple(self.methods))
        if not self.r_grid:
            raise ConfigError("r_grid must not be empty")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown or not self.methods:
            raise ConfigError(f"methods must be a nonempty subset of {METHODS}, got {self.methods}")
        for r in self.r_grid:
            # validates both the range and Scenario-B admissibility
            ScenarioConfig(self.scenario, r, n=1, seed=0)


@dataclass(frozen=True)
class TrialRecord:
    r: float
    trial: int
    method: str
    metric: str
    feature: str | None
    value: float | None


def _trial_seed(base_seed: int, r_index: int, trial: int) -> int:
    ss = np.random.SeedSequence(entropy=base_seed, spawn_key=(r_index, trial))
    return int(ss.generate_state(1, np.uint64)[0])


def _fit_methods(spec: SweepSpec, train: Dataset, seed: int) -> dict[str, Predictor]:
    cfg = TrainConfig(learning_rate=spec.learning_rate, epochs=spec.epochs, seed=seed)
    needs_full = set(spec.methods) & {"trad_full", "mim", "opt_mde", "opt_shap"}
    full = train_logistic(train, cfg) if needs_full else None
    out: dict[str, Predictor] = {}
    for method in spec.methods:
        if method == "trad_full":
            out[method] = full
        elif method == "trad_wo_z":
            out[method] = train_logistic(train, cfg, mask=list(train.x_idx))
        elif method == "mim":
            out[method] = mim(full, train)
        else:
            measure = InfluenceMeasure.MDE if method == "opt_mde" else InfluenceMeasure.SHAP
            opt_cfg = OptConfig(
                measure=measure,
                granularity="per_feature",
                epochs=spec.opt_epochs,
                mc_samples=spec.opt_mc_samples,
                seed=seed,
                stage1=cfg,
            )
            out[method] = opt_fit(train, full, opt_cfg).model
    return out


def _score_trial(
    spec: SweepSpec, r: float, trial: int, method: str, model: Predictor, test: Dataset, seed: int
) -> list[TrialRecord]:
    records = []

    def rec(metric: str, feature: str | None, value: float | None) -> None:
        records.append(TrialRecord(r, trial, method, metric, feature, value))

    rec("accuracy", None, evaluate(model, test).accuracy)

    z_col = test.z_idx[0]
    y_pred = (model.predict(test.features) >= 0.5).astype(int)
    grouped = GroupedOutcomes.from_predictions(
        test.labels, y_pred, test.features[:, z_col].astype(int)
    )
    for name in FAIRNESS_METRICS:
        try:
            rec(name, None, fairness.ALL_METRICS[name](grouped))
        except UndefinedMetricError:
            rec(name, None, None)

    for measure in INFLUENCE_MEASURES:
        for feature in test.names:
            est = global_influence(
                model,
                test,
                feature,
                measure,
                n_eval=spec.n_eval,
                n_inner=spec.n_inner,
                seed=seed,
            )
            rec(measure.value, feature, est.value)
    return records


def run_trials(spec: SweepSpec) -> list[TrialRecord]:
    """All per-trial records, in deterministic order."""
    records: list[TrialRecord] = []
    for r_index, r in enumerate(spec.r_grid):
        for trial in range(spec.trials):
            seed = _trial_seed(spec.seed, r_index, trial)
            data = make_scenario(ScenarioConfig(spec.scenario, r, spec.n_per_trial, seed))
            train, test = train_test_split(data, spec.test_fraction, seed)
            models = _fit_methods(spec, train, seed)
            for method in spec.methods:
                records.extend(
                    _score_trial(spec, r, trial, method, models[method], test, seed)
                )
    return records


def aggregate_records(spec: SweepSpec, records) -> list[SweepRow]:
    groups: dict[tuple, list] = {}
    for rec in records:
        groups.setdefault((rec.r, rec.method, rec.metric, rec.feature or ""), []).append(rec.value)
    rows = []
    for (r, method, metric, feature), values in sorted(groups.items()):
        defined = [v for v in values if v is not None]
        if not defined:
            rows.append(SweepRow(spec.scenario, r, method, metric, feature, None, None, None, 0))
            continue
        mean = float(np.mean(defined))
        if len(defined) == 1:
            low = high = mean
        else:
            low, high = bootstrap_ci(
                defined, level=0.95, resamples=spec.bootstrap_resamples, seed=spec.seed
            )
        rows.append(
            SweepRow(spec.scenario, r, method, metric, feature, mean, low, high, len(defined))
        )
    return rows


def run_sweep(spec: SweepSpec, out_path) -> list[SweepRow]:
    """Run all trials, write the aggregated CSV, return its rows."""
    rows = aggregate_records(spec, run_trials(spec))
    write_sweep_csv(out_path, rows)
    return rows


def _method_label(model: Predictor) -> str:
    if isinstance(model, MixtureModel):
        return MIXTURE_TYPE
    if isinstance(model, LinearLogisticModel):
        return LINEAR_TYPE
    return type(model).__name__


def _fairness_value(grouped: GroupedOutcomes, metric_fn):
    try:
        return metric_fn(grouped)
    except UndefinedMetricError:
        return None


def run_audit(model_path, data_path, schema_path, out_dir) -> tuple[Path, Path]:
    """Influence + fairness reports for one model on one labeled CSV.

    Writes influence.csv and fairness.csv under out_dir and returns
    both paths. Small datasets are scored by exhaustive enumeration;
    larger ones fall back to the default Monte Carlo sizes.
    """
    schema = read_schema(schema_path)
    data = load_dataset_csv(data_path, schema)
    model = load_model(model_path)
    if model.n_features != data.n_features:
        raise ConfigError(
            f"model expects {model.n_features} features, dataset has {data.n_features}"
        )
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    method = _method_label(model)

    exhaustive = data.n_rows <= _EXHAUSTIVE_AUDIT_ROWS
    n_eval = None if exhaustive else 256
    n_inner = None if exhaustive else 128
    influence_rows = []
    for measure in INFLUENCE_MEASURES:
        for feature in data.names:
            est = global_influence(
                model, data, feature, measure, n_eval=n_eval, n_inner=n_inner, seed=0
            )
            influence_rows.append(
                InfluenceRow(method, feature, measure.value, est.value, est.stderr, est.n_samples)
            )
    influence_path = out_dir / "influence.csv"
    write_influence_csv(influence_path, influence_rows)

    fairness_rows = _audit_fairness(model, data, method)
    fairness_path = out_dir / "fairness.csv"
    write_fairness_csv(fairness_path, fairness_rows)
    return influence_path, fairness_path


def _audit_fairness(model: Predictor, data: Dataset, method: str) -> list[FairnessRow]:
    y_pred = (model.predict(data.features) >= 0.5).astype(int)
    z_cols = data.z_idx
    z = data.features[:, z_cols[0]]
    multi_column = len(z_cols) > 1
    levels = np.unique(z)
    binary = not multi_column and set(levels) <= {0.0, 1.0}

    rows = []
    rng = np.random.default_rng(0)
    idx = rng.integers(0, data.n_rows, size=(1000, data.n_rows))
    for name, fn in fairness.ALL_METRICS.items():
        if multi_column:
            rows.append(FairnessRow(method, name, None))
            continue
        if binary:
            point = _fairness_value(
                GroupedOutcomes.from_predictions(data.labels, y_pred, z.astype(int)), fn
            )
        else:
            # multi-valued Z: worst pairwise gap vs the lowest level
            try:
                point = fairness.max_pairwise(fn, data.labels, y_pred, z, float(levels[0]))
            except UndefinedMetricError:
                point = None
        if point is None:
            rows.append(FairnessRow(method, name, None))
            continue
        resampled = []
        for sel in idx:
            try:
                if binary:
                    v = fn(
                        GroupedOutcomes.from_predictions(
                            data.labels[sel], y_pred[sel], z[sel].astype(int)
                        )
                    )
                else:
                    v = fairness.max_pairwise(
                        fn, data.labels[sel], y_pred[sel], z[sel], float(levels[0])
                    )
            except (UndefinedMetricError, ValueError):
                continue
            resampled.append(v)
        if len(resampled) >= 2:
            alpha = 0.025
            low, high = np.quantile(resampled, [alpha, 1.0 - alpha])
            rows.append(FairnessRow(method, name, point, float(low), float(high)))
        else:
            rows.append(FairnessRow(method, name, point))
    return rows
