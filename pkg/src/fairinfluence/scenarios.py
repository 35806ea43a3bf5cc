"""Synthetic two-feature scenarios with a correlated protected bit.

Both scenarios draw (X1, X2, Zlat) from a standard-normal copula with
a configurable X1-Zlat correlation r, binarize Z = 1{Zlat > 0}, and
draw Bernoulli labels from a fixed logistic law:

  A: y ~ Bern(sigma(X1 + X2 + Z + 1)), X2 independent of everything
  B: y ~ Bern(sigma(X2 + 1)), with corr(X2, Zlat) pinned at 0.5

In B the label never reads X1 or Z, so any influence a model assigns
them is picked up through correlation alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .errors import NotPositiveSemiDefiniteError
from .kernels import sigmoid
from .samplers import keyed_rng

SCENARIOS = ("A", "B")
FEATURE_NAMES = ("X1", "X2", "Z")

# relative eigenvalue slack: anything this negative is a real violation
_PSD_TOL = 1e-9


def scenario_correlation(scenario: str, r: float) -> np.ndarray:
    """Latent 3x3 correlation matrix in (X1, X2, Zlat) order."""
    if scenario == "A":
        x2_z = 0.0
    elif scenario == "B":
        x2_z = 0.5
    else:
        raise ValueError(f"scenario must be one of {SCENARIOS}, got {scenario!r}")
    return np.array(
        [
            [1.0, 0.0, r],
            [0.0, 1.0, x2_z],
            [r, x2_z, 1.0],
        ]
    )


def _psd_factor(corr: np.ndarray) -> np.ndarray:
    """Square root F with F F^T = corr, or raise if corr is not PSD."""
    eigvals, eigvecs = np.linalg.eigh(corr)
    scale = max(1.0, float(eigvals[-1]))
    if eigvals[0] < -_PSD_TOL * scale:
        raise NotPositiveSemiDefiniteError(
            f"correlation matrix is not positive semi-definite (min eigenvalue {eigvals[0]:.3e})"
        )
    return eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))


@dataclass(frozen=True)
class ScenarioConfig:
    scenario: str
    r: float
    n: int
    seed: int = 0

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ValueError(f"scenario must be one of {SCENARIOS}, got {self.scenario!r}")
        if not 0.0 <= self.r < 1.0:
            raise ValueError("r must be in [0, 1)")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        # Scenario B caps admissible r at sqrt(0.75); fail at config time
        _psd_factor(scenario_correlation(self.scenario, self.r))


def sample_correlated_gaussian(corr: np.ndarray, n: int, seed: int = 0) -> np.ndarray:
    """n draws with standard-normal marginals and the given correlations."""
    corr = np.asarray(corr, dtype=np.float64)
    if corr.ndim != 2 or corr.shape[0] != corr.shape[1]:
        raise ValueError("corr must be a square matrix")
    if not np.allclose(corr, corr.T, atol=1e-12):
        raise ValueError("corr must be symmetric")
    if not np.allclose(np.diag(corr), 1.0, atol=1e-12):
        raise ValueError("corr must have a unit diagonal")
    if n < 1:
        raise ValueError("n must be >= 1")
    factor = _psd_factor(corr)
    rng = np.random.default_rng(seed)
    return rng.standard_normal((n, corr.shape[0])) @ factor.T


def make_scenario(cfg: ScenarioConfig) -> Dataset:
    latent = sample_correlated_gaussian(
        scenario_correlation(cfg.scenario, cfg.r), cfg.n, cfg.seed
    )
    x1, x2 = latent[:, 0], latent[:, 1]
    z = (latent[:, 2] > 0.0).astype(np.float64)
    logit = x1 + x2 + z + 1.0 if cfg.scenario == "A" else x2 + 1.0
    u = keyed_rng(cfg.seed, ("scenario-labels",)).random(cfg.n)
    labels = (u < sigmoid(logit)).astype(np.int64)
    return Dataset(
        np.column_stack([x1, x2, z]), FEATURE_NAMES, frozenset({2}), labels
    )
