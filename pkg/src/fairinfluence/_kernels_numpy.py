"""Pure-numpy implementations of the hot kernels.

These are the reference implementations; the numba versions in
``_kernels_numba`` must agree with them to float tolerance.
"""

from __future__ import annotations

import numpy as np

# exp underflows to 0 below about -745, so -700 keeps probabilities > 0;
# on the positive side 1 + exp(-37) already rounds to 1.0 in float64.
LOGIT_MIN = -700.0
LOGIT_MAX = 36.0


def sigmoid(z: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function with clamped logits.

    The clamp keeps outputs strictly inside (0, 1) so downstream losses
    can take logs of both p and 1-p.
    """
    z = np.clip(np.asarray(z, dtype=np.float64), LOGIT_MIN, LOGIT_MAX)
    out = np.empty_like(z)
    neg = z < 0.0
    pos = ~neg
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[neg])
    out[neg] = ez / (1.0 + ez)
    return out


def _cross_entropy_from_logits(z: np.ndarray, y: np.ndarray) -> float:
    # mean(softplus(z) - y*z), stable for any logit magnitude
    return float(np.mean(np.logaddexp(0.0, z) - y * z))


def adam_logistic(
    X: np.ndarray,
    y: np.ndarray,
    lr: float,
    epochs: int,
    beta1: float,
    beta2: float,
    eps: float,
) -> tuple[np.ndarray, float, np.ndarray]:
    """Full-batch ADAM on the logistic cross-entropy, zero-initialized.

    Returns ``(weights, bias, history)`` where ``history[t]`` is the
    training cross-entropy after ``t`` epochs (``history[0]`` is the
    zero-model loss) and the returned parameters are the best iterate
    seen, so their loss never exceeds ``history[0]``.
    """
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    mw = np.zeros(d)
    vw = np.zeros(d)
    mb = 0.0
    vb = 0.0
    history = np.empty(epochs + 1)
    z = X @ w + b
    history[0] = _cross_entropy_from_logits(z, y)
    best_ce = history[0]
    best_w = w.copy()
    best_b = b
    for t in range(1, epochs + 1):
        p = sigmoid(z)
        resid = p - y
        gw = X.T @ resid / n
        gb = float(np.mean(resid))
        mw = beta1 * mw + (1.0 - beta1) * gw
        vw = beta2 * vw + (1.0 - beta2) * gw * gw
        mb = beta1 * mb + (1.0 - beta1) * gb
        vb = beta2 * vb + (1.0 - beta2) * gb * gb
        c1 = 1.0 - beta1**t
        c2 = 1.0 - beta2**t
        w = w - lr * (mw / c1) / (np.sqrt(vw / c2) + eps)
        b = b - lr * (mb / c1) / (np.sqrt(vb / c2) + eps)
        z = X @ w + b
        ce = _cross_entropy_from_logits(z, y)
        history[t] = ce
        if ce < best_ce:
            best_ce = ce
            best_w = w.copy()
            best_b = b
    return best_w, best_b, history


def masked_mix_matrix(
    row_vals: np.ndarray,
    base_vals: np.ndarray,
    masks: np.ndarray,
    bias: float,
) -> np.ndarray:
    """Sigmoid outputs of composite rows for every (baseline, mask) pair.

    ``row_vals`` is the evaluation row's per-feature weight contribution
    (x_k * w_k, shape D), ``base_vals`` the same for B baseline rows
    (B x D), ``masks`` a boolean M x D keep-matrix.  The composite logit
    keeps the evaluation row on masked columns and the baseline row
    elsewhere; linearity of the logit lets it split into two dot
    products.  Returns a B x M matrix of probabilities.
    """
    keep = masks.astype(np.float64)
    row_part = keep @ row_vals
    base_part = base_vals @ (1.0 - keep).T
    return sigmoid(base_part + row_part[None, :] + bias)


def shift_pair_means(
    a_vals: np.ndarray,
    b_vals: np.ndarray,
    offsets: np.ndarray,
    scale: float,
) -> np.ndarray:
    """Mean over offsets of sigmoid(scale*a + c) - sigmoid(scale*b + c).

    Used for single-column interventions: ``offsets`` carries the summed
    contribution of every other column, so each pair (a_k, b_k) shares
    the same inner sample.  Returns one mean per pair (shape K).
    """
    za = np.add.outer(scale * np.asarray(a_vals, dtype=np.float64), offsets)
    zb = np.add.outer(scale * np.asarray(b_vals, dtype=np.float64), offsets)
    return (sigmoid(za) - sigmoid(zb)).mean(axis=1)
