"""Interventional mixtures over the protected columns.

An interventional mixture replaces a model's dependence on the
protected columns Z by an average over an independent mixing
distribution: x maps to sum_j pi_j * base(x, z_j). The mixture is a
function of the non-protected columns only; whatever Z values appear in
an input row are overwritten before the base model ever sees them, so
Z-independence holds structurally rather than by test.

The marginal interventional mixture (MIM) uses the empirical marginal
of Z as the mixing distribution, collapsed to distinct observed levels
with their frequencies, so the mixture is an exact expectation with no
sampling noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .influence import distinct_protected_levels
from .models import Predictor


@dataclass(frozen=True)
class MixtureModel:
    """A base model averaged over a weighted reservoir of Z values."""

    base: Predictor
    protected_idx: tuple[int, ...]
    mix_values: np.ndarray
    mix_weights: np.ndarray

    def __post_init__(self) -> None:
        prot = tuple(sorted(int(i) for i in self.protected_idx))
        if not prot:
            raise ValueError("mixture needs at least one protected column")
        if any(not 0 <= i < self.base.n_features for i in prot):
            raise ValueError("protected indices out of range for the base model")
        values = np.asarray(self.mix_values, dtype=np.float64)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2 or values.shape[1] != len(prot):
            raise ValueError(
                f"mix_values must be (L, {len(prot)}) for {len(prot)} protected columns"
            )
        if values.shape[0] < 1:
            raise ValueError("mixing reservoir must be nonempty")
        weights = np.asarray(self.mix_weights, dtype=np.float64).reshape(-1)
        if weights.shape[0] != values.shape[0]:
            raise ValueError("one weight per mixing value required")
        if np.any(weights < 0.0):
            raise ValueError("mixing weights must be nonnegative")
        total = weights.sum()
        if not total > 0.0:
            raise ValueError("mixing weights must have positive sum")
        weights = weights / total
        values = values.copy()
        values.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "protected_idx", prot)
        object.__setattr__(self, "mix_values", values)
        object.__setattr__(self, "mix_weights", weights)

    @property
    def n_features(self) -> int:
        return self.base.n_features

    def predict(self, rows: np.ndarray) -> np.ndarray:
        rows = np.asarray(rows, dtype=np.float64)
        single = rows.ndim == 1
        if single:
            rows = rows[None, :]
        cols = list(self.protected_idx)
        work = np.array(rows, copy=True)
        acc = np.zeros(rows.shape[0])
        for z_row, weight in zip(self.mix_values, self.mix_weights):
            work[:, cols] = z_row
            acc = acc + weight * self.base.predict(work)
        return acc


def interventional_mixture(base: Predictor, protected_idx, values, weights=None) -> MixtureModel:
    """Wrap ``base`` with an explicit mixing reservoir over Z.

    ``weights=None`` means uniform. Weights are normalized; negative
    weights or an empty reservoir are rejected.
    """
    values = np.asarray(values, dtype=np.float64)
    if values.ndim == 1:
        values = values[:, None]
    if weights is None:
        weights = np.full(values.shape[0], 1.0 / max(values.shape[0], 1))
    return MixtureModel(
        base=base,
        protected_idx=tuple(protected_idx),
        mix_values=values,
        mix_weights=np.asarray(weights, dtype=np.float64),
    )


def mim(base: Predictor, data: Dataset) -> MixtureModel:
    """Marginal interventional mixture: mixing distribution = empirical Z.

    Distinct observed Z rows enter with their empirical frequencies, so
    the mixture output is the exact expectation over the marginal.
    """
    levels, probs = distinct_protected_levels(data)
    return MixtureModel(
        base=base,
        protected_idx=data.z_idx,
        mix_values=levels,
        mix_weights=probs,
    )
