"""Numba implementations of the hot kernels.

Import only succeeds when numba is installed; ``kernels`` guards the
import and falls back to the numpy versions.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from ._kernels_numpy import LOGIT_MAX, LOGIT_MIN


@njit(cache=True, inline="always")
def _sigmoid_scalar(z: float) -> float:
    if z < LOGIT_MIN:
        z = LOGIT_MIN
    elif z > LOGIT_MAX:
        z = LOGIT_MAX
    if z >= 0.0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


@njit(cache=True, inline="always")
def _softplus_scalar(z: float) -> float:
    if z > 0.0:
        return z + math.log1p(math.exp(-z))
    return math.log1p(math.exp(z))


@njit(cache=True)
def adam_logistic(X, y, lr, epochs, beta1, beta2, eps):
    n, d = X.shape
    w = np.zeros(d)
    b = 0.0
    mw = np.zeros(d)
    vw = np.zeros(d)
    mb = 0.0
    vb = 0.0
    history = np.empty(epochs + 1)
    z = np.zeros(n)
    ce0 = 0.0
    for i in range(n):
        ce0 += _softplus_scalar(z[i]) - y[i] * z[i]
    history[0] = ce0 / n
    best_ce = history[0]
    best_w = w.copy()
    best_b = b
    gw = np.empty(d)
    for t in range(1, epochs + 1):
        for k in range(d):
            gw[k] = 0.0
        gb = 0.0
        for i in range(n):
            r = _sigmoid_scalar(z[i]) - y[i]
            for k in range(d):
                gw[k] += X[i, k] * r
            gb += r
        for k in range(d):
            gw[k] /= n
        gb /= n
        c1 = 1.0 - beta1**t
        c2 = 1.0 - beta2**t
        for k in range(d):
            mw[k] = beta1 * mw[k] + (1.0 - beta1) * gw[k]
            vw[k] = beta2 * vw[k] + (1.0 - beta2) * gw[k] * gw[k]
            w[k] -= lr * (mw[k] / c1) / (math.sqrt(vw[k] / c2) + eps)
        mb = beta1 * mb + (1.0 - beta1) * gb
        vb = beta2 * vb + (1.0 - beta2) * gb * gb
        b -= lr * (mb / c1) / (math.sqrt(vb / c2) + eps)
        ce = 0.0
        for i in range(n):
            s = b
            for k in range(d):
                s += X[i, k] * w[k]
            z[i] = s
            ce += _softplus_scalar(s) - y[i] * s
        ce /= n
        history[t] = ce
        if ce < best_ce:
            best_ce = ce
            best_w = w.copy()
            best_b = b
    return best_w, best_b, history


@njit(cache=True)
def masked_mix_matrix(row_vals, base_vals, masks, bias):
    B, D = base_vals.shape
    M = masks.shape[0]
    out = np.empty((B, M))
    for m in range(M):
        row_part = bias
        for k in range(D):
            if masks[m, k]:
                row_part += row_vals[k]
        for j in range(B):
            s = row_part
            for k in range(D):
                if not masks[m, k]:
                    s += base_vals[j, k]
            out[j, m] = _sigmoid_scalar(s)
    return out


@njit(cache=True)
def shift_pair_means(a_vals, b_vals, offsets, scale):
    K = a_vals.shape[0]
    B = offsets.shape[0]
    out = np.empty(K)
    for k in range(K):
        za = scale * a_vals[k]
        zb = scale * b_vals[k]
        acc = 0.0
        for j in range(B):
            acc += _sigmoid_scalar(za + offsets[j]) - _sigmoid_scalar(zb + offsets[j])
        out[k] = acc / B
    return out
