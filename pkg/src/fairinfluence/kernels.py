"""Backend-dispatching wrappers for the hot numeric kernels.

Every kernel takes an optional ``backend`` override; by default the
choice comes from the ``FAIRINFLUENCE_BACKEND`` environment variable
(see :mod:`fairinfluence.backend`).
"""

from __future__ import annotations

import numpy as np

from . import _kernels_numpy as _np_impl
from .backend import HAS_NUMBA, resolve_backend

if HAS_NUMBA:
    from . import _kernels_numba as _nb_impl
else:  # pragma: no cover - exercised only without numba installed
    _nb_impl = None

LOGIT_MIN = _np_impl.LOGIT_MIN
LOGIT_MAX = _np_impl.LOGIT_MAX

sigmoid = _np_impl.sigmoid


def _impl(backend: str | None):
    if resolve_backend(backend) == "numba":
        return _nb_impl
    return _np_impl


def adam_logistic_train(
    X: np.ndarray,
    y: np.ndarray,
    lr: float,
    epochs: int,
    beta1: float,
    beta2: float,
    eps: float,
    backend: str | None = None,
) -> tuple[np.ndarray, float, np.ndarray]:
    """Full-batch ADAM logistic fit; returns (weights, bias, loss history)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    return _impl(backend).adam_logistic(X, y, lr, epochs, beta1, beta2, eps)


def masked_mix_matrix(
    row_vals: np.ndarray,
    base_vals: np.ndarray,
    masks: np.ndarray,
    bias: float,
    backend: str | None = None,
) -> np.ndarray:
    """B x M sigmoid outputs of keep-mask composites of a row over baselines."""
    row_vals = np.ascontiguousarray(row_vals, dtype=np.float64)
    base_vals = np.ascontiguousarray(base_vals, dtype=np.float64)
    masks = np.ascontiguousarray(masks, dtype=np.bool_)
    return _impl(backend).masked_mix_matrix(row_vals, base_vals, masks, float(bias))


def shift_pair_means(
    a_vals: np.ndarray,
    b_vals: np.ndarray,
    offsets: np.ndarray,
    scale: float,
    backend: str | None = None,
) -> np.ndarray:
    """Per-pair means of sigmoid(scale*a + c) - sigmoid(scale*b + c) over offsets c."""
    a_vals = np.ascontiguousarray(a_vals, dtype=np.float64)
    b_vals = np.ascontiguousarray(b_vals, dtype=np.float64)
    offsets = np.ascontiguousarray(offsets, dtype=np.float64)
    return _impl(backend).shift_pair_means(a_vals, b_vals, offsets, float(scale))
