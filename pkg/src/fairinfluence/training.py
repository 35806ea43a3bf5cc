"""Maximum-likelihood training of the linear-logistic model.

Full-batch ADAM on the binary cross-entropy, zero-initialized. The
objective is convex, so deterministic zero init loses nothing, and
two runs with the same config produce bitwise-identical weights. The
returned model is the best iterate by training loss, which therefore
never exceeds the zero-model loss.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .data import Dataset
from .kernels import adam_logistic_train, sigmoid
from .models import LinearLogisticModel, Predictor


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-2
    epochs: int = 100
    batch_size: int | None = None
    seed: int = 0
    adam_beta1: float = 0.9
    adam_beta2: float = 0.999
    adam_epsilon: float = 1e-8

    def __post_init__(self) -> None:
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError("learning_rate must be in (0, 1]")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.batch_size is not None and self.batch_size < 1:
            raise ValueError("batch_size must be >= 1 when given")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")
        for name in ("adam_beta1", "adam_beta2"):
            if not 0.0 <= getattr(self, name) < 1.0:
                raise ValueError(f"{name} must be in [0, 1)")
        if self.adam_epsilon <= 0.0:
            raise ValueError("adam_epsilon must be positive")


def _resolve_mask(data: Dataset, mask: Iterable[int] | None) -> list[int]:
    if mask is None:
        cols = list(range(data.n_features))
    else:
        cols = sorted({int(i) for i in mask})
    if not cols:
        raise ValueError("feature mask must select at least one column")
    if any(not 0 <= i < data.n_features for i in cols):
        raise ValueError(f"mask indices out of range [0, {data.n_features})")
    return cols


def fit_logistic_with_history(
    data: Dataset,
    cfg: TrainConfig,
    mask: Iterable[int] | None = None,
    backend: str | None = None,
) -> tuple[LinearLogisticModel, np.ndarray]:
    """Train and also return the per-epoch training cross-entropy.

    ``history[0]`` is the zero-model loss; ``history[t]`` the loss after
    epoch t. The model packs the fitted weights into a full-width vector
    with zeros on masked-out columns.
    """
    cols = _resolve_mask(data, mask)
    X = data.features[:, cols]
    y = data.labels.astype(np.float64)
    if cfg.batch_size is None or cfg.batch_size >= data.n_rows:
        w_fit, b_fit, history = adam_logistic_train(
            X,
            y,
            cfg.learning_rate,
            cfg.epochs,
            cfg.adam_beta1,
            cfg.adam_beta2,
            cfg.adam_epsilon,
            backend=backend,
        )
    else:
        w_fit, b_fit, history = _minibatch_adam(X, y, cfg)
    weights = np.zeros(data.n_features)
    weights[cols] = w_fit
    model = LinearLogisticModel(weights, b_fit, frozenset(cols))
    return model, history


def train_logistic(
    data: Dataset,
    cfg: TrainConfig,
    mask: Iterable[int] | None = None,
    backend: str | None = None,
) -> LinearLogisticModel:
    """Fit by cross-entropy; deterministic for fixed (data, cfg, mask)."""
    model, _ = fit_logistic_with_history(data, cfg, mask, backend=backend)
    return model


def _ce_from_logits(z: np.ndarray, y: np.ndarray) -> float:
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def _minibatch_adam(X: np.ndarray, y: np.ndarray, cfg: TrainConfig):
    n, d = X.shape
    rng = np.random.default_rng(cfg.seed)
    w = np.zeros(d)
    b = 0.0
    mw = np.zeros(d)
    vw = np.zeros(d)
    mb = vb = 0.0
    history = np.empty(cfg.epochs + 1)
    history[0] = _ce_from_logits(X @ w + b, y)
    best = (history[0], w.copy(), b)
    step = 0
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n)
        for start in range(0, n, cfg.batch_size):
            idx = order[start : start + cfg.batch_size]
            Xb, yb = X[idx], y[idx]
            resid = sigmoid(Xb @ w + b) - yb
            gw = Xb.T @ resid / idx.size
            gb = float(np.mean(resid))
            step += 1
            mw = cfg.adam_beta1 * mw + (1 - cfg.adam_beta1) * gw
            vw = cfg.adam_beta2 * vw + (1 - cfg.adam_beta2) * gw * gw
            mb = cfg.adam_beta1 * mb + (1 - cfg.adam_beta1) * gb
            vb = cfg.adam_beta2 * vb + (1 - cfg.adam_beta2) * gb * gb
            c1 = 1.0 - cfg.adam_beta1**step
            c2 = 1.0 - cfg.adam_beta2**step
            w = w - cfg.learning_rate * (mw / c1) / (np.sqrt(vw / c2) + cfg.adam_epsilon)
            b = b - cfg.learning_rate * (mb / c1) / (np.sqrt(vb / c2) + cfg.adam_epsilon)
        ce = _ce_from_logits(X @ w + b, y)
        history[epoch] = ce
        if ce < best[0]:
            best = (ce, w.copy(), b)
    return best[1], best[2], history


@dataclass(frozen=True)
class EvalResult:
    accuracy: float
    cross_entropy: float


def evaluate(model: Predictor, data: Dataset, threshold: float = 0.5) -> EvalResult:
    """Accuracy and mean cross-entropy of predicted probabilities."""
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must be in (0, 1)")
    p = model.predict(data.features)
    y = data.labels.astype(np.float64)
    preds = (p >= threshold).astype(np.int64)
    accuracy = float(np.mean(preds == data.labels))
    ce = float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))
    return EvalResult(accuracy=accuracy, cross_entropy=ce)
