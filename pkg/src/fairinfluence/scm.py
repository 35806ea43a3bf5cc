"""Linear structural causal model with one unfair mediator path.

Columns are C (exogenous standard normal), M (unfair mediator, reads
Z), L (fair mediator, reads Z and M), Z (Bernoulli protected), and a
continuous outcome Y. The mixture correction recomputes the unfair
mediator at the mean protected value and propagates it downstream; the
path-specific counterfactual baseline differs from it by the constant
delta = zbar * (th_y_z + th_y_m*th_m_z + th_y_l*th_l_m*th_m_z).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import FunctionModel, Predictor

FEATURE_NAMES = ("C", "M", "L", "Z")
PROTECTED_IDX = 3


def _check_coeffs(name: str, values, length: int) -> tuple[float, ...]:
    out = tuple(float(v) for v in values)
    if len(out) != length:
        raise ValueError(f"{name} must hold exactly {length} coefficients")
    if not all(np.isfinite(out)):
        raise ValueError(f"{name} must be finite")
    return out


@dataclass(frozen=True)
class LinearSCM:
    """theta_m = (th_m, th_m_z, th_m_c); theta_l adds th_l_m; theta_y adds th_y_l."""

    theta_m: tuple[float, float, float]
    theta_l: tuple[float, float, float, float]
    theta_y: tuple[float, float, float, float, float]
    noise_std: tuple[float, float, float] = (0.0, 0.0, 0.0)
    z_prob: float = 0.5

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta_m", _check_coeffs("theta_m", self.theta_m, 3))
        object.__setattr__(self, "theta_l", _check_coeffs("theta_l", self.theta_l, 4))
        object.__setattr__(self, "theta_y", _check_coeffs("theta_y", self.theta_y, 5))
        object.__setattr__(self, "noise_std", _check_coeffs("noise_std", self.noise_std, 3))
        if any(s < 0 for s in self.noise_std):
            raise ValueError("noise_std entries must be >= 0")
        if not 0.0 <= self.z_prob <= 1.0:
            raise ValueError("z_prob must be in [0, 1]")


@dataclass(frozen=True)
class SCMSample:
    """Simulated draw: features in column order C, M, L, Z plus continuous y."""

    features: np.ndarray
    y: np.ndarray

    @property
    def c(self) -> np.ndarray:
        return self.features[:, 0]

    @property
    def m(self) -> np.ndarray:
        return self.features[:, 1]

    @property
    def l(self) -> np.ndarray:
        return self.features[:, 2]

    @property
    def z(self) -> np.ndarray:
        return self.features[:, 3]


def simulate_scm(scm: LinearSCM, n: int, seed: int = 0) -> SCMSample:
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    c = rng.standard_normal(n)
    z = (rng.random(n) < scm.z_prob).astype(np.float64)
    t_m, t_l, t_y = scm.theta_m, scm.theta_l, scm.theta_y
    s_m, s_l, s_y = scm.noise_std
    m = t_m[0] + t_m[1] * z + t_m[2] * c + s_m * rng.standard_normal(n)
    l = t_l[0] + t_l[1] * z + t_l[2] * c + t_l[3] * m + s_l * rng.standard_normal(n)
    y = t_y[0] + t_y[1] * z + t_y[2] * c + t_y[3] * m + t_y[4] * l + s_y * rng.standard_normal(n)
    features = np.column_stack([c, m, l, z])
    features.setflags(write=False)
    y.setflags(write=False)
    return SCMSample(features, y)


def _mim_fn(scm: LinearSCM, z_mean: float):
    t_m, t_l, t_y = scm.theta_m, scm.theta_l, scm.theta_y

    def fn(rows: np.ndarray) -> np.ndarray:
        c, m, z = rows[:, 0], rows[:, 1], rows[:, 3]
        m_hat = m - t_m[1] * (z - z_mean)
        l_hat = t_l[0] + t_l[1] * z + t_l[2] * c + t_l[3] * m_hat
        return t_y[0] + t_y[1] * z_mean + t_y[2] * c + t_y[3] * m_hat + t_y[4] * l_hat

    return fn


def build_mim_predictor(scm: LinearSCM, z_mean: float | None = None) -> Predictor:
    """Mixture-corrected predictor over rows (c, m, l, z).

    The unfair mediator is de-biased in place (m_hat = m - th_m_z *
    (z - zbar)), the fair mediator is recomputed from it, and the
    outcome equation reads zbar instead of z. Observed L is ignored.
    """
    zbar = scm.z_prob if z_mean is None else float(z_mean)
    return FunctionModel(_mim_fn(scm, zbar), 4)


def delta(scm: LinearSCM, z_mean: float | None = None) -> float:
    """Constant offset between the mixture and counterfactual baselines."""
    zbar = scm.z_prob if z_mean is None else float(z_mean)
    t_m, t_l, t_y = scm.theta_m, scm.theta_l, scm.theta_y
    return zbar * (t_y[1] + t_y[3] * t_m[1] + t_y[4] * t_l[3] * t_m[1])


def build_pscf_predictor(scm: LinearSCM, z_mean: float | None = None) -> Predictor:
    """Counterfactual-baseline predictor: the mixture one minus delta."""
    zbar = scm.z_prob if z_mean is None else float(z_mean)
    mim_fn = _mim_fn(scm, zbar)
    d = delta(scm, zbar)
    return FunctionModel(lambda rows: mim_fn(rows) - d, 4)


@dataclass(frozen=True)
class MseGapResult:
    mse_pscf: float
    mse_mim: float
    delta_sq: float
    residual: float
    stderr_diff: float


def mse_gap_check(scm: LinearSCM, n: int = 100_000, seed: int = 0) -> MseGapResult:
    """Verify mse_pscf - mse_mim = delta^2 on a simulated draw.

    Both predictors use the draw's empirical z mean, which makes the
    mixture residuals average to zero exactly and the identity hold up
    to float rounding even at finite n. Contract: residual <= 4 *
    stderr of the per-row MSE difference.
    """
    if n < 1000:
        raise ValueError("n must be >= 1000")
    sample = simulate_scm(scm, n, seed)
    zbar = float(np.mean(sample.z))
    err_mim = sample.y - build_mim_predictor(scm, zbar).predict(sample.features)
    err_pscf = sample.y - build_pscf_predictor(scm, zbar).predict(sample.features)
    sq_diff = err_pscf**2 - err_mim**2
    mse_mim = float(np.mean(err_mim**2))
    mse_pscf = float(np.mean(err_pscf**2))
    d_sq = delta(scm, zbar) ** 2
    return MseGapResult(
        mse_pscf=mse_pscf,
        mse_mim=mse_mim,
        delta_sq=d_sq,
        residual=abs(mse_pscf - mse_mim - d_sq),
        stderr_diff=float(np.std(sq_diff, ddof=1) / np.sqrt(n)),
    )
