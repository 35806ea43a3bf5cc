"""Monomial toy model and the optimal-coefficient property check.

For a reference y = alpha * x^k * z^l and candidates b * x^k that
ignore z, the empirical SHAP-preservation objective in b is an exact
quadratic whose minimizer is alpha * mean(z^l): the mixture over the
empirical z marginal. The check below verifies that numerically by
grid search, with no sampling noise in the minimizer location.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, FlatObjectiveError

_MAX_EXPONENT = 8


@dataclass(frozen=True)
class PolynomialToyModel:
    """y(x, z) = alpha * x^k * z^l with small integer exponents."""

    alpha: float
    k: int
    l: int

    def __post_init__(self) -> None:
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")
        for name in ("k", "l"):
            e = getattr(self, name)
            if not isinstance(e, (int, np.integer)) or not 0 <= e <= _MAX_EXPONENT:
                raise ValueError(f"{name} must be an integer in [0, {_MAX_EXPONENT}]")

    def evaluate(self, x, z) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        z = np.asarray(z, dtype=np.float64)
        return self.alpha * x**self.k * z**self.l


def _check_samples(x, z) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64).ravel()
    z = np.asarray(z, dtype=np.float64).ravel()
    if x.size != z.size or x.size < 2:
        raise ValueError("x and z must be equal-length samples with at least 2 points")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(z))):
        raise ValueError("samples must be finite")
    return x, z


def _reference_attributions(toy: PolynomialToyModel, x: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Per-sample SHAP of the x player in the two-player {x, z} game.

    Coalition values are empirical means over the sample itself, with
    the grand coalition and the z-only coalition both averaged over the
    observed z draws. phi_i = 1/2 [v({x})_i - v(empty)] +
    1/2 [v({x})_i - mean_r v({x})_r].
    """
    # v({x}) at x_i: mean over baseline z of y(x_i, z_r)
    v_x = toy.evaluate(x[:, None], z[None, :]).mean(axis=1)
    v_empty = float(np.mean(toy.evaluate(x, z)))  # joint baseline, paired rows
    v_pairs = float(np.mean(v_x))  # all (x_r, z_j) combinations
    return 0.5 * (v_x - v_empty) + 0.5 * (v_x - v_pairs)


def beta_loss_curve(toy: PolynomialToyModel, x, z, beta_grid) -> np.ndarray:
    """Empirical squared-error objective L(b) over the candidate grid."""
    x, z = _check_samples(x, z)
    grid = np.asarray(beta_grid, dtype=np.float64).ravel()
    if grid.size < 2 or not np.all(np.isfinite(grid)):
        raise ConfigError("beta_grid must hold at least 2 finite values")
    ref = _reference_attributions(toy, x, z)
    xk = x**toy.k
    u = xk - xk.mean()  # candidate SHAP is b*u: both game terms coincide
    resid = ref[None, :] - grid[:, None] * u[None, :]
    return np.mean(resid * resid, axis=1)


def optimal_beta_search(toy: PolynomialToyModel, x, z, beta_grid) -> float:
    """Grid argmin of the candidate objective; must bracket the optimum.

    The analytic minimizer is alpha * mean(z^l); a degenerate x^k
    (zero sample variance, e.g. k=0) makes the objective constant in
    b and there is nothing to search for.
    """
    x, z = _check_samples(x, z)
    grid = np.asarray(beta_grid, dtype=np.float64).ravel()
    xk = x**toy.k
    if np.var(xk) == 0.0:
        raise FlatObjectiveError(
            "objective is constant in beta: x^k has zero sample variance"
        )
    target = toy.alpha * float(np.mean(z**toy.l))
    lo, hi = float(np.min(grid)), float(np.max(grid))
    if not lo <= target <= hi:
        raise ConfigError(
            f"beta_grid [{lo}, {hi}] does not bracket the optimum {target}"
        )
    curve = beta_loss_curve(toy, x, z, grid)
    return float(grid[int(np.argmin(curve))])
