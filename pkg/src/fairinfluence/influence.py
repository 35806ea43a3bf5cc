"""Causal and input influence measures.

Direct effects (CDE, NDE, MDE) intervene on the protected columns or on
one feature column while the rest comes from an empirical baseline.
Attribution measures (marginal influence, exact and permutation-sampled
Shapley values) compose the evaluation row with joint baseline rows
over feature coalitions. Classifier influence is always measured on
outcome probabilities.

Passing ``n=None`` enumerates the baseline reservoir exhaustively
instead of sampling, which makes the axiomatic identities (efficiency,
symmetry, null feature) exact up to float roundoff.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np

from .backend import resolve_backend
from .data import Dataset, RowSpace
from .kernels import masked_mix_matrix, shift_pair_means, sigmoid
from .models import LinearLogisticModel, Predictor
from .samplers import BaselineSampler, ConditionalSampler, InfluenceEstimate, estimate_from_values

# generic-path composites are built in blocks of at most this many cells
_CHUNK_CELLS = 2_000_000


class InfluenceMeasure(str, Enum):
    SHAP = "shap"
    MDE = "mde"


def _as_measure(measure) -> InfluenceMeasure:
    if isinstance(measure, InfluenceMeasure):
        return measure
    try:
        return InfluenceMeasure(str(measure).lower())
    except ValueError:
        raise ValueError(
            f"unknown influence measure {measure!r}; expected 'shap' or 'mde'"
        ) from None


def substitute(rows: np.ndarray, cols, values) -> np.ndarray:
    """Copy of ``rows`` with the given columns overwritten (broadcast over rows)."""
    out = np.array(rows, copy=True)
    cols = list(np.atleast_1d(cols))
    vals = np.atleast_1d(np.asarray(values, dtype=np.float64))
    if vals.shape != (len(cols),):
        raise ValueError(f"expected {len(cols)} substitution values, got shape {vals.shape}")
    out[:, cols] = vals
    return out


def cde(model: Predictor, x, z_to, z_from, space: RowSpace) -> float:
    """Controlled direct effect: yhat(x, z_to) - yhat(x, z_from)."""
    row_to = space.compose(x, z_to)
    row_from = space.compose(x, z_from)
    both = np.stack([row_to, row_from])
    preds = model.predict(both)
    return float(preds[0] - preds[1])


def mde(
    model: Predictor,
    z_to,
    z_from,
    baseline: BaselineSampler,
    n: int | None = None,
) -> InfluenceEstimate:
    """Marginal direct effect: CDE averaged over X from its marginal.

    The non-protected part of each evaluation row comes from the
    baseline's independently shuffled columns, so the average is over
    the product of marginals rather than the joint.
    """
    if baseline.space is None:
        raise ValueError("baseline sampler has no protected-column layout; build it from a dataset")
    z_cols = list(baseline.space.protected_idx)
    if not z_cols:
        raise ValueError("no protected columns declared")
    rows = baseline.marginal_rows(n, key=("mde",))
    to_rows = substitute(rows, z_cols, z_to)
    from_rows = substitute(rows, z_cols, z_from)
    vals = model.predict(to_rows) - model.predict(from_rows)
    return estimate_from_values(vals)


def nde(
    model: Predictor,
    z_to,
    z_from,
    cond: ConditionalSampler,
    z_ref_mediator,
    n: int | None = None,
) -> InfluenceEstimate:
    """Natural direct effect with the mediator X drawn from P(X | z_ref)."""
    rows = cond.sample(z_ref_mediator, n, key=("nde",))
    z_cols = list(cond.z_idx)
    to_rows = substitute(rows, z_cols, z_to)
    from_rows = substitute(rows, z_cols, z_from)
    vals = model.predict(to_rows) - model.predict(from_rows)
    return estimate_from_values(vals)


def marginal_influence(
    model: Predictor,
    w,
    i: int,
    T,
    baseline: BaselineSampler,
    n: int | None = None,
) -> InfluenceEstimate:
    """Expected output change from restoring feature i on top of kept set T.

    Both composites share the same joint baseline rows, so the estimate
    is the paired mean of yhat(w_{T+i} W'_rest) - yhat(w_T W'_rest).
    """
    w = np.asarray(w, dtype=np.float64)
    d = baseline.n_features
    if w.shape != (d,):
        raise ValueError(f"expected a full row of length {d}, got shape {w.shape}")
    keep = sorted({int(t) for t in T})
    if any(not 0 <= t < d for t in keep):
        raise ValueError("subset T contains an out-of-range index")
    if not 0 <= i < d:
        raise ValueError(f"feature index {i} out of range")
    if i in keep:
        raise ValueError(f"feature {i} must not be in the kept subset")
    mask_bits = sum(1 << t for t in keep)
    base = baseline.joint_rows(n, key=("mi", i, mask_bits))
    with_rows = base.copy()
    with_rows[:, keep + [i]] = w[keep + [i]]
    without_rows = base.copy()
    without_rows[:, keep] = w[keep]
    vals = model.predict(with_rows) - model.predict(without_rows)
    return estimate_from_values(vals)


def _coalition_masks(players: tuple[int, ...], i: int, d: int):
    """Keep-masks and Shapley weights for all subsets T of players minus i.

    Non-player columns are always kept from the evaluation row. Returns
    (masks_without (M, d), masks_with (M, d), weights (M,)).
    """
    others = [p for p in players if p != i]
    m = 1 << len(others)
    base = np.ones(d, dtype=bool)
    base[list(players)] = False
    masks_without = np.empty((m, d), dtype=bool)
    for t in range(m):
        mask = base.copy()
        for b, col in enumerate(others):
            if t >> b & 1:
                mask[col] = True
        masks_without[t] = mask
    masks_with = masks_without.copy()
    masks_with[:, i] = True
    sizes = masks_without[:, others].sum(axis=1) if others else np.zeros(m, dtype=int)
    n_players = len(players)
    weights = np.array(
        [1.0 / (n_players * math.comb(n_players - 1, int(s))) for s in sizes]
    )
    return masks_without, masks_with, weights


def _mix_means_by_row(
    model: LinearLogisticModel, rows: np.ndarray, base: np.ndarray, masks: np.ndarray
) -> np.ndarray:
    """(K, M) means over baseline draws of sigmoid on mask composites."""
    rv = rows * model.weights
    bv = base * model.weights
    if resolve_backend() == "numba":
        out = np.empty((rows.shape[0], masks.shape[0]))
        for k in range(rows.shape[0]):
            out[k] = masked_mix_matrix(rv[k], bv, masks, model.bias).mean(axis=0)
        return out
    keep = masks.astype(np.float64)
    keep_dots = rv @ keep.T
    base_dots = bv @ (1.0 - keep).T
    out = np.empty((rows.shape[0], masks.shape[0]))
    for m in range(masks.shape[0]):
        out[:, m] = sigmoid(
            keep_dots[:, m : m + 1] + base_dots[None, :, m] + model.bias
        ).mean(axis=1)
    return out


def _generic_mix_means(
    model: Predictor, rows: np.ndarray, base: np.ndarray, masks: np.ndarray
) -> np.ndarray:
    """Generic-model version of :func:`_mix_means_by_row`, chunked over rows."""
    k_total, d = rows.shape
    b = base.shape[0]
    out = np.empty((k_total, masks.shape[0]))
    step = max(1, _CHUNK_CELLS // max(1, b * d))
    for start in range(0, k_total, step):
        block = rows[start : start + step]
        for m, mask in enumerate(masks):
            comp = np.where(mask[None, None, :], block[:, None, :], base[None, :, :])
            preds = model.predict(comp.reshape(-1, d)).reshape(block.shape[0], b)
            out[start : start + step, m] = preds.mean(axis=1)
    return out


def coalition_attributions(
    model: Predictor,
    rows: np.ndarray,
    i: int,
    players: tuple[int, ...],
    base_rows: np.ndarray,
) -> np.ndarray:
    """Shapley attribution of feature i at each evaluation row.

    The coalition game runs over ``players`` only; columns outside the
    player set always keep the evaluation row's value. Baseline rows are
    enumerated exactly (no resampling inside this helper).
    """
    rows = np.asarray(rows, dtype=np.float64)
    masks_without, masks_with, weights = _coalition_masks(players, i, rows.shape[1])
    all_masks = np.vstack([masks_without, masks_with])
    if isinstance(model, LinearLogisticModel):
        means = _mix_means_by_row(model, rows, base_rows, all_masks)
    else:
        means = _generic_mix_means(model, rows, base_rows, all_masks)
    m = masks_without.shape[0]
    return (means[:, m:] - means[:, :m]) @ weights


def shap_exact(
    model: Predictor,
    w,
    i: int,
    baseline: BaselineSampler,
    n: int | None = None,
) -> InfluenceEstimate:
    """Shapley value of feature i at row w by full subset enumeration.

    Satisfies efficiency: summed over i it equals yhat(w) minus the
    baseline mean prediction (exactly, for an exhaustive baseline).
    """
    w = np.asarray(w, dtype=np.float64)
    d = baseline.n_features
    if w.shape != (d,):
        raise ValueError(f"expected a full row of length {d}, got shape {w.shape}")
    if not 0 <= i < d:
        raise ValueError(f"feature index {i} out of range")
    if d > 20:
        raise ValueError(
            f"subset enumeration over {d} features is infeasible (2^{d - 1} coalitions); "
            "use shap_sampled instead"
        )
    base = baseline.joint_rows(n, key=("shap", i))
    masks_without, masks_with, weights = _coalition_masks(tuple(range(d)), i, d)
    m = masks_without.shape[0]
    all_masks = np.vstack([masks_without, masks_with])
    if isinstance(model, LinearLogisticModel):
        mat = masked_mix_matrix(w * model.weights, base * model.weights, all_masks, model.bias)
    else:
        mat = np.empty((base.shape[0], 2 * m))
        for mi, mask in enumerate(all_masks):
            comp = np.where(mask[None, :], w[None, :], base)
            mat[:, mi] = model.predict(comp)
    per_draw = (mat[:, m:] - mat[:, :m]) @ weights
    return estimate_from_values(per_draw)


def shap_sampled(
    model: Predictor,
    w,
    i: int,
    baseline: BaselineSampler,
    n_permutations: int,
) -> InfluenceEstimate:
    """Unbiased permutation-sampling estimate of :func:`shap_exact`.

    Each permutation contributes one marginal-influence draw: the kept
    set is the features preceding i, completed by a single joint
    baseline row.
    """
    if n_permutations < 1:
        raise ValueError("n_permutations must be >= 1")
    w = np.asarray(w, dtype=np.float64)
    d = baseline.n_features
    if w.shape != (d,):
        raise ValueError(f"expected a full row of length {d}, got shape {w.shape}")
    if not 0 <= i < d:
        raise ValueError(f"feature index {i} out of range")
    rng = baseline.rng(("shap-sampled", i))
    rows = baseline.rows
    with_rows = np.empty((n_permutations, d))
    without_rows = np.empty((n_permutations, d))
    for p in range(n_permutations):
        perm = rng.permutation(d)
        pos = int(np.where(perm == i)[0][0])
        kept = perm[:pos]
        base = rows[int(rng.integers(0, rows.shape[0]))]
        without = base.copy()
        without[kept] = w[kept]
        with_rows[p] = without
        with_rows[p, i] = w[i]
        without_rows[p] = without
    vals = model.predict(with_rows) - model.predict(without_rows)
    return estimate_from_values(vals)


def column_shift_values(
    model: Predictor,
    a_vals: np.ndarray,
    b_vals: np.ndarray,
    col: int,
    inner_rows: np.ndarray,
) -> np.ndarray:
    """Per-pair single-column direct effects, averaged over inner rows.

    For each pair (a_k, b_k): mean over inner rows U of
    yhat(U with column col = a_k) - yhat(U with column col = b_k).
    """
    a_vals = np.asarray(a_vals, dtype=np.float64)
    b_vals = np.asarray(b_vals, dtype=np.float64)
    if a_vals.shape != b_vals.shape:
        raise ValueError("paired value arrays must have equal length")
    if isinstance(model, LinearLogisticModel):
        offsets = inner_rows @ model.weights - model.weights[col] * inner_rows[:, col] + model.bias
        return shift_pair_means(a_vals, b_vals, offsets, float(model.weights[col]))
    k_total = a_vals.size
    b = inner_rows.shape[0]
    d = inner_rows.shape[1]
    out = np.empty(k_total)
    step = max(1, _CHUNK_CELLS // max(1, b * d))
    for start in range(0, k_total, step):
        a_blk = a_vals[start : start + step]
        b_blk = b_vals[start : start + step]
        comp = np.repeat(inner_rows[None, :, :], a_blk.size, axis=0)
        comp[:, :, col] = a_blk[:, None]
        pa = model.predict(comp.reshape(-1, d)).reshape(a_blk.size, b)
        comp[:, :, col] = b_blk[:, None]
        pb = model.predict(comp.reshape(-1, d)).reshape(a_blk.size, b)
        out[start : start + step] = (pa - pb).mean(axis=1)
    return out


def distinct_protected_levels(data: Dataset) -> tuple[np.ndarray, np.ndarray]:
    """Distinct protected-column rows and their empirical frequencies."""
    if not data.protected_idx:
        raise ValueError("dataset has no protected columns")
    z_rows = data.features[:, list(data.z_idx)]
    levels, counts = np.unique(z_rows, axis=0, return_counts=True)
    return levels, counts / counts.sum()


def global_influence(
    model: Predictor,
    data: Dataset,
    feature,
    measure,
    n_eval: int | None = None,
    n_inner: int | None = None,
    seed: int = 0,
) -> InfluenceEstimate:
    """Mean absolute per-row influence of one feature over the dataset.

    measure=shap: Shapley attribution of the feature with the protected
    columns averaged out (inner expectation over the empirical protected
    marginal), then |.| averaged over evaluation rows.

    measure=mde: single-column direct effect between the row's own value
    and a marginal draw, inner-averaged over independently shuffled
    rows, then |.| averaged over evaluation rows.

    ``n_eval=None`` evaluates at every dataset row; ``n_inner=None``
    enumerates baselines exhaustively.
    """
    measure = _as_measure(measure)
    fi = data.column(feature) if isinstance(feature, str) else int(feature)
    if not 0 <= fi < data.n_features:
        raise ValueError(f"feature index {fi} out of range")
    baseline = BaselineSampler.from_dataset(data, seed=seed)
    eval_rows = baseline.joint_rows(n_eval, key=("global-eval", fi))
    if measure is InfluenceMeasure.SHAP:
        base = baseline.joint_rows(n_inner, key=("global-shap-base", fi))
        levels, probs = distinct_protected_levels(data)
        z_cols = list(data.z_idx)
        inner = np.zeros(eval_rows.shape[0])
        for level, prob in zip(levels, probs):
            rows_l = substitute(eval_rows, z_cols, level)
            inner = inner + prob * coalition_attributions(
                model, rows_l, fi, tuple(range(data.n_features)), base
            )
        return estimate_from_values(np.abs(inner))
    a_vals = eval_rows[:, fi]
    b_vals = baseline.column_values(fi, eval_rows.shape[0] if n_eval is not None else None, ("global-mde-b", fi))
    inner_rows = baseline.marginal_rows(n_inner, key=("global-mde-inner", fi))
    vals = column_shift_values(model, a_vals, b_vals, fi, inner_rows)
    return estimate_from_values(np.abs(vals))
