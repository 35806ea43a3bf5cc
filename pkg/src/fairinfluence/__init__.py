"""Influence measures, influence-preserving fair models, and audits.

The pieces compose in layers: raw predictors (models), per-feature and
coalition influence measures (influence), interventional mixtures and
the two-stage optimizers that remove protected influence while
preserving the rest (mixtures, opt, nested), loss operations tying
candidates to references (losses), and a synthetic-scenario harness
with fairness reporting (scenarios, sweep, fairness, reports).
"""

from .backend import BACKEND_ENV, HAS_NUMBA, resolve_backend
from .data import CsvSchema, Dataset, RowSpace, load_dataset_csv, read_schema, train_test_split
from .errors import (
    BackendError,
    ConfigError,
    FlatObjectiveError,
    NotPositiveSemiDefiniteError,
    UndefinedMetricError,
)
from .fairness import (
    GroupCounts,
    GroupedOutcomes,
    accuracy_disparity,
    demographic_disparity,
    disparate_impact,
    equal_opportunity_diff,
    equalized_odds_gap,
    max_pairwise,
)
from .influence import (
    InfluenceEstimate,
    InfluenceMeasure,
    cde,
    global_influence,
    marginal_influence,
    mde,
    nde,
    shap_exact,
    shap_sampled,
)
from .losses import LossConfig, check_ignores_protected, influence_preservation_loss
from .mixtures import MixtureModel, interventional_mixture, mim
from .models import (
    AffineModel,
    FunctionModel,
    LinearLogisticModel,
    Predictor,
    predict_label,
    predict_proba,
)
from .nested import FeatureStage, NestedDebiasedModel, nested_removal
from .opt import OptConfig, OptResult, opt_fit
from .reports import bootstrap_ci
from .samplers import BaselineSampler, ConditionalSampler
from .scenarios import ScenarioConfig, make_scenario, sample_correlated_gaussian, scenario_correlation
from .scm import (
    LinearSCM,
    MseGapResult,
    SCMSample,
    build_mim_predictor,
    build_pscf_predictor,
    delta,
    mse_gap_check,
    simulate_scm,
)
from .serialize import load_model, model_from_text, model_to_text, save_model
from .sweep import SweepSpec, TrialRecord, run_audit, run_sweep, run_trials
from .toymodel import PolynomialToyModel, beta_loss_curve, optimal_beta_search
from .training import EvalResult, TrainConfig, evaluate, fit_logistic_with_history, train_logistic

__version__ = "0.1.0"

__all__ = [
    "AffineModel",
    "BACKEND_ENV",
    "BackendError",
    "BaselineSampler",
    "ConditionalSampler",
    "ConfigError",
    "CsvSchema",
    "Dataset",
    "EvalResult",
    "FeatureStage",
    "FlatObjectiveError",
    "FunctionModel",
    "GroupCounts",
    "GroupedOutcomes",
    "HAS_NUMBA",
    "InfluenceEstimate",
    "InfluenceMeasure",
    "LinearLogisticModel",
    "LinearSCM",
    "LossConfig",
    "MixtureModel",
    "MseGapResult",
    "NestedDebiasedModel",
    "NotPositiveSemiDefiniteError",
    "OptConfig",
    "OptResult",
    "PolynomialToyModel",
    "Predictor",
    "RowSpace",
    "SCMSample",
    "ScenarioConfig",
    "SweepSpec",
    "TrainConfig",
    "TrialRecord",
    "UndefinedMetricError",
    "accuracy_disparity",
    "beta_loss_curve",
    "bootstrap_ci",
    "build_mim_predictor",
    "build_pscf_predictor",
    "cde",
    "check_ignores_protected",
    "delta",
    "demographic_disparity",
    "disparate_impact",
    "equal_opportunity_diff",
    "equalized_odds_gap",
    "evaluate",
    "fit_logistic_with_history",
    "global_influence",
    "influence_preservation_loss",
    "interventional_mixture",
    "load_dataset_csv",
    "load_model",
    "make_scenario",
    "marginal_influence",
    "max_pairwise",
    "mde",
    "mim",
    "model_from_text",
    "model_to_text",
    "mse_gap_check",
    "nde",
    "nested_removal",
    "opt_fit",
    "optimal_beta_search",
    "predict_label",
    "predict_proba",
    "read_schema",
    "resolve_backend",
    "run_audit",
    "run_sweep",
    "run_trials",
    "sample_correlated_gaussian",
    "save_model",
    "scenario_correlation",
    "shap_exact",
    "shap_sampled",
    "simulate_scm",
    "train_logistic",
    "train_test_split",
]
