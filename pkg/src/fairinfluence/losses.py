"""Influence-preservation losses.

Measure how far a Z-free candidate model's influence values sit from a
full reference model's, in squared error. Two measures (direct effects
or Shapley attributions) times two granularities:

* pooled: one intervention on the whole non-protected block X;
* per_feature: one term per component X_i, summed.

Reference-side inner expectations over the protected marginal are taken
exactly over the distinct observed Z levels (the same reduction the
marginal interventional mixture uses), so a candidate that equals the
mixture scores an exact zero on the pooled direct-effect loss.

All Monte Carlo index draws are keyed by the config seed, so the loss
is a deterministic function of (candidate, reference, data, cfg).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .influence import (
    InfluenceMeasure,
    _as_measure,
    coalition_attributions,
    column_shift_values,
    distinct_protected_levels,
    substitute,
)
from .mixtures import interventional_mixture
from .models import Predictor
from .samplers import BaselineSampler, InfluenceEstimate, estimate_from_values

GRANULARITIES = ("pooled", "per_feature")


@dataclass(frozen=True)
class LossConfig:
    measure: InfluenceMeasure = InfluenceMeasure.MDE
    granularity: str = "per_feature"
    n_outer: int | None = 256
    n_inner: int | None = 128
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "measure", _as_measure(self.measure))
        if self.granularity not in GRANULARITIES:
            raise ValueError(f"granularity must be one of {GRANULARITIES}")
        for name in ("n_outer", "n_inner"):
            val = getattr(self, name)
            if val is not None and val < 1:
                raise ValueError(f"{name} must be >= 1 or None for exhaustive")


def check_ignores_protected(candidate: Predictor, data: Dataset) -> None:
    """Reject candidates whose output moves when only Z changes."""
    levels, _ = distinct_protected_levels(data)
    z_cols = list(data.z_idx)
    probe = data.features[: min(8, data.n_rows)]
    if levels.shape[0] >= 2:
        z_a, z_b = levels[0], levels[1]
    else:
        z_a, z_b = levels[0], levels[0] + 1.0
    out_a = candidate.predict(substitute(probe, z_cols, z_a))
    out_b = candidate.predict(substitute(probe, z_cols, z_b))
    if not np.array_equal(out_a, out_b):
        raise ValueError("candidate output varies with the protected columns; it must be a function of X only")


def _reference_mixture(reference: Predictor, data: Dataset):
    levels, probs = distinct_protected_levels(data)
    return interventional_mixture(reference, data.z_idx, levels, probs)


def pooled_mde_parts(reference: Predictor, data: Dataset, cfg: LossConfig):
    """Paired rows (a from the joint, b from shuffled marginals) and the
    reference's pooled direct effects for each pair."""
    baseline = BaselineSampler.from_dataset(data, seed=cfg.seed)
    a_rows = baseline.joint_rows(cfg.n_outer, key=("loss-outer",))
    b_rows = baseline.marginal_rows(cfg.n_outer, key=("loss-b",))
    ref_mix = _reference_mixture(reference, data)
    ref_vals = ref_mix.predict(a_rows) - ref_mix.predict(b_rows)
    return a_rows, b_rows, ref_vals


def pooled_shap_parts(reference: Predictor, data: Dataset, cfg: LossConfig):
    """Evaluation rows, baseline rows, and the reference's two-block
    Shapley value of the X block (protected marginal averaged out)."""
    baseline = BaselineSampler.from_dataset(data, seed=cfg.seed)
    a_rows = baseline.joint_rows(cfg.n_outer, key=("loss-outer",))
    b_rows = baseline.joint_rows(cfg.n_inner, key=("loss-base",))
    levels, probs = distinct_protected_levels(data)
    x_cols = list(data.x_idx)
    z_cols = list(data.z_idx)
    base_mean = float(np.mean(reference.predict(b_rows)))
    # T = empty: restore X on top of nothing, Z comes from the joint baseline
    d = data.n_features
    n_a, n_b = a_rows.shape[0], b_rows.shape[0]
    empty_term = np.empty(n_a)
    step = max(1, 2_000_000 // max(1, n_b * d))
    for start in range(0, n_a, step):
        block = a_rows[start : start + step]
        swapped = np.repeat(b_rows[None, :, :], block.shape[0], axis=0)
        swapped[:, :, x_cols] = block[:, None, x_cols]
        empty_term[start : start + step] = (
            reference.predict(swapped.reshape(-1, d)).reshape(block.shape[0], n_b).mean(axis=1)
        )
    empty_term -= base_mean
    # T = {Z}: restore X with Z pinned, averaged over the protected marginal
    z_term = np.zeros(a_rows.shape[0])
    for level, prob in zip(levels, probs):
        at_level = reference.predict(substitute(a_rows, z_cols, level))
        base_at_level = float(np.mean(reference.predict(substitute(b_rows, z_cols, level))))
        z_term = z_term + prob * (at_level - base_at_level)
    ref_vals = 0.5 * empty_term + 0.5 * z_term
    return a_rows, b_rows, ref_vals


def ind_mde_parts(reference: Predictor, data: Dataset, cfg: LossConfig):
    """Per X-feature paired values, shared inner rows, and reference effects."""
    baseline = BaselineSampler.from_dataset(data, seed=cfg.seed)
    parts = []
    for i in data.x_idx:
        a_vals = baseline.joint_rows(cfg.n_outer, key=("loss-a", i))[:, i]
        b_vals = baseline.column_values(
            i, None if cfg.n_outer is None else a_vals.shape[0], ("loss-b", i)
        )
        inner = baseline.marginal_rows(cfg.n_inner, key=("loss-inner", i))
        ref_vals = column_shift_values(reference, a_vals, b_vals, i, inner)
        parts.append((i, a_vals, b_vals, inner, ref_vals))
    return parts


def ind_shap_parts(reference: Predictor, data: Dataset, cfg: LossConfig):
    """Per X-feature reference attributions with the inner protected average.

    The reference plays the full d-player game at rows (x, z'') averaged
    over distinct z'' levels; candidates will play the X-only game at
    the same rows and baselines.
    """
    baseline = BaselineSampler.from_dataset(data, seed=cfg.seed)
    a_rows = baseline.joint_rows(cfg.n_outer, key=("loss-outer",))
    b_rows = baseline.joint_rows(cfg.n_inner, key=("loss-base",))
    levels, probs = distinct_protected_levels(data)
    z_cols = list(data.z_idx)
    all_players = tuple(range(data.n_features))
    ref_by_feature = []
    for i in data.x_idx:
        target = np.zeros(a_rows.shape[0])
        for level, prob in zip(levels, probs):
            rows_l = substitute(a_rows, z_cols, level)
            target = target + prob * coalition_attributions(
                reference, rows_l, i, all_players, b_rows
            )
        ref_by_feature.append((i, target))
    return a_rows, b_rows, ref_by_feature


def _combine(per_term: list[np.ndarray]) -> InfluenceEstimate:
    """Sum of per-feature mean squared discrepancies, stderrs combined
    in quadrature (independent draws across features)."""
    estimates = [estimate_from_values(sq) for sq in per_term]
    value = float(sum(e.value for e in estimates))
    stderr = float(np.sqrt(sum(e.stderr**2 for e in estimates)))
    return InfluenceEstimate(value=value, stderr=stderr, n_samples=estimates[0].n_samples)


def influence_preservation_loss(
    candidate: Predictor,
    reference: Predictor,
    data: Dataset,
    cfg: LossConfig,
) -> InfluenceEstimate:
    """Squared discrepancy between candidate and reference influences.

    The candidate must be a function of X only (probed, and rejected
    otherwise); the reference is the model whose influence pattern
    should be preserved. Returns a Monte Carlo estimate with stderr.
    """
    check_ignores_protected(candidate, data)
    if cfg.measure is InfluenceMeasure.MDE and cfg.granularity == "pooled":
        a_rows, b_rows, ref_vals = pooled_mde_parts(reference, data, cfg)
        cand_vals = candidate.predict(a_rows) - candidate.predict(b_rows)
        return estimate_from_values((ref_vals - cand_vals) ** 2)
    if cfg.measure is InfluenceMeasure.MDE:
        per_term = []
        for i, a_vals, b_vals, inner, ref_vals in ind_mde_parts(reference, data, cfg):
            cand_vals = column_shift_values(candidate, a_vals, b_vals, i, inner)
            per_term.append((ref_vals - cand_vals) ** 2)
        return _combine(per_term)
    if cfg.granularity == "pooled":
        a_rows, b_rows, ref_vals = pooled_shap_parts(reference, data, cfg)
        cand_vals = candidate.predict(a_rows) - float(np.mean(candidate.predict(b_rows)))
        return estimate_from_values((ref_vals - cand_vals) ** 2)
    a_rows, b_rows, ref_by_feature = ind_shap_parts(reference, data, cfg)
    x_players = tuple(data.x_idx)
    per_term = []
    for i, target in ref_by_feature:
        cand_vals = coalition_attributions(candidate, a_rows, i, x_players, b_rows)
        per_term.append((target - cand_vals) ** 2)
    return _combine(per_term)
