"""Predictive models over full feature rows.

Every model exposes ``predict(rows)`` mapping an (N, D) matrix to N
outputs. Classifiers return outcome probabilities; regression-style
models return raw values. Influence measures only ever call
``predict``, so any object satisfying :class:`Predictor` works.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Protocol, runtime_checkable

import numpy as np

from .kernels import sigmoid


@runtime_checkable
class Predictor(Protocol):
    n_features: int

    def predict(self, rows: np.ndarray) -> np.ndarray: ...


def _as_rows(rows: np.ndarray, n_features: int) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.float64)
    if rows.ndim == 1:
        rows = rows[None, :]
    if rows.ndim != 2 or rows.shape[1] != n_features:
        raise ValueError(f"expected rows with {n_features} columns, got shape {rows.shape}")
    return rows


@dataclass(frozen=True)
class LinearLogisticModel:
    """sigma(w^T x + b) with a fixed set of active columns.

    Weights of inactive columns are pinned at exactly 0 so a model
    trained without the protected columns cannot leak them.
    """

    weights: np.ndarray
    bias: float
    feature_mask: frozenset[int]

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a nonempty 1-D vector")
        if not np.all(np.isfinite(w)) or not np.isfinite(self.bias):
            raise ValueError("model parameters must be finite")
        mask = frozenset(int(i) for i in self.feature_mask)
        if any(not 0 <= i < w.size for i in mask):
            raise ValueError("feature_mask indices out of range")
        inactive = [i for i in range(w.size) if i not in mask]
        if inactive and np.any(w[inactive] != 0.0):
            raise ValueError("inactive columns must have weight exactly 0")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))
        object.__setattr__(self, "feature_mask", mask)

    @property
    def n_features(self) -> int:
        return self.weights.size

    def logits(self, rows: np.ndarray) -> np.ndarray:
        rows = _as_rows(rows, self.n_features)
        return rows @ self.weights + self.bias

    def predict(self, rows: np.ndarray) -> np.ndarray:
        return sigmoid(self.logits(rows))


@dataclass(frozen=True)
class AffineModel:
    """Plain affine map w^T x + b, for regression-style references."""

    weights: np.ndarray
    bias: float

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("weights must be a nonempty 1-D vector")
        if not np.all(np.isfinite(w)) or not np.isfinite(self.bias):
            raise ValueError("model parameters must be finite")
        w = w.copy()
        w.flags.writeable = False
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "bias", float(self.bias))

    @property
    def n_features(self) -> int:
        return self.weights.size

    def predict(self, rows: np.ndarray) -> np.ndarray:
        return _as_rows(rows, self.n_features) @ self.weights + self.bias


@dataclass(frozen=True)
class FunctionModel:
    """Wrap an arbitrary vectorized function of full rows as a Predictor."""

    fn: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    n_features: int = 1

    def predict(self, rows: np.ndarray) -> np.ndarray:
        out = np.asarray(self.fn(_as_rows(rows, self.n_features)), dtype=np.float64)
        return out.reshape(-1)


def predict_proba(model: Predictor, x: np.ndarray) -> float:
    """Outcome probability for a single full row, strictly inside (0, 1)."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise ValueError(f"expected a vector of length {model.n_features}, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("input row must be finite")
    return float(model.predict(x[None, :])[0])


def predict_label(model: Predictor, x: np.ndarray, threshold: float = 0.5) -> int:
    """Hard label: 1 iff the probability reaches the threshold (ties -> 1)."""
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must be in (0, 1)")
    return int(predict_proba(model, x) >= threshold)
