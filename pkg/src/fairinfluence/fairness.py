"""Group-fairness metrics over confusion counts split by a protected bit.

Every metric either returns a well-defined number or raises
UndefinedMetricError naming the metric and the empty stratum; nothing
is silently coerced to 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UndefinedMetricError


@dataclass(frozen=True)
class GroupCounts:
    tp: int
    fp: int
    tn: int
    fn: int

    def __post_init__(self) -> None:
        for name in ("tp", "fp", "tn", "fn"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer")
            object.__setattr__(self, name, int(v))

    @property
    def n(self) -> int:
        return self.tp + self.fp + self.tn + self.fn

    @property
    def label_positives(self) -> int:
        return self.tp + self.fn

    @property
    def label_negatives(self) -> int:
        return self.fp + self.tn

    @property
    def predicted_positives(self) -> int:
        return self.tp + self.fp


@dataclass(frozen=True)
class GroupedOutcomes:
    """Confusion counts for the z=0 and z=1 strata."""

    group0: GroupCounts
    group1: GroupCounts

    @classmethod
    def from_predictions(cls, y_true, y_pred, z) -> "GroupedOutcomes":
        y_true = np.asarray(y_true)
        y_pred = np.asarray(y_pred)
        z = np.asarray(z)
        if not (y_true.shape == y_pred.shape == z.shape) or y_true.ndim != 1:
            raise ValueError("y_true, y_pred, z must be 1-D arrays of equal length")
        for name, arr in (("y_true", y_true), ("y_pred", y_pred), ("z", z)):
            if not np.all(np.isin(arr, (0, 1))):
                raise ValueError(f"{name} must contain only 0 and 1")
        groups = []
        for g in (0, 1):
            sel = z == g
            yt, yp = y_true[sel], y_pred[sel]
            groups.append(
                GroupCounts(
                    tp=int(np.sum((yt == 1) & (yp == 1))),
                    fp=int(np.sum((yt == 0) & (yp == 1))),
                    tn=int(np.sum((yt == 0) & (yp == 0))),
                    fn=int(np.sum((yt == 1) & (yp == 0))),
                )
            )
        return cls(groups[0], groups[1])

    def swapped(self) -> "GroupedOutcomes":
        return GroupedOutcomes(self.group1, self.group0)


def _require(count: int, metric: str, stratum: str) -> None:
    if count == 0:
        raise UndefinedMetricError(f"{metric} undefined: empty stratum ({stratum})")


def _positive_rate(g: GroupCounts, metric: str, stratum: str) -> float:
    _require(g.n, metric, stratum)
    return g.predicted_positives / g.n


def _tpr(g: GroupCounts, metric: str, stratum: str) -> float:
    _require(g.label_positives, metric, f"{stratum}, y=1")
    return g.tp / g.label_positives


def _fpr(g: GroupCounts, metric: str, stratum: str) -> float:
    _require(g.label_negatives, metric, f"{stratum}, y=0")
    return g.fp / g.label_negatives


def demographic_disparity(g: GroupedOutcomes) -> float:
    """|P(yhat=1 | z=0) - P(yhat=1 | z=1)|"""
    m = "demographic_disparity"
    return abs(_positive_rate(g.group0, m, "z=0") - _positive_rate(g.group1, m, "z=1"))


def disparate_impact(g: GroupedOutcomes) -> float:
    """P(yhat=1 | z=0) / P(yhat=1 | z=1); undefined when the z=1 rate is 0."""
    m = "disparate_impact"
    num = _positive_rate(g.group0, m, "z=0")
    den = _positive_rate(g.group1, m, "z=1")
    if den == 0.0:
        raise UndefinedMetricError(f"{m} undefined: zero positive rate in denominator group (z=1)")
    return num / den


def equal_opportunity_diff(g: GroupedOutcomes) -> float:
    """|TPR(z=0) - TPR(z=1)|"""
    m = "equal_opportunity_diff"
    return abs(_tpr(g.group0, m, "z=0") - _tpr(g.group1, m, "z=1"))


def equalized_odds_gap(g: GroupedOutcomes) -> float:
    """(|FPR gap| + |TPR gap|) / 2, the relaxed scalar form."""
    m = "equalized_odds_gap"
    fpr_gap = abs(_fpr(g.group0, m, "z=0") - _fpr(g.group1, m, "z=1"))
    tpr_gap = abs(_tpr(g.group0, m, "z=0") - _tpr(g.group1, m, "z=1"))
    return 0.5 * (fpr_gap + tpr_gap)


def accuracy_disparity(g: GroupedOutcomes) -> float:
    """|accuracy(z=0) - accuracy(z=1)|"""
    m = "accuracy_disparity"
    _require(g.group0.n, m, "z=0")
    _require(g.group1.n, m, "z=1")
    acc0 = (g.group0.tp + g.group0.tn) / g.group0.n
    acc1 = (g.group1.tp + g.group1.tn) / g.group1.n
    return abs(acc0 - acc1)


ALL_METRICS = {
    "demographic_disparity": demographic_disparity,
    "disparate_impact": disparate_impact,
    "equal_opportunity_diff": equal_opportunity_diff,
    "equalized_odds_gap": equalized_odds_gap,
    "accuracy_disparity": accuracy_disparity,
}


def pairwise_outcomes(y_true, y_pred, z, reference) -> list[tuple[float, GroupedOutcomes]]:
    """Multi-valued Z: one GroupedOutcomes per non-reference level.

    The reference level plays group0 in every pair.
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    z = np.asarray(z, dtype=np.float64)
    levels = np.unique(z)
    if reference not in levels:
        raise ValueError(f"reference level {reference} not present in z")
    pairs = []
    for level in levels:
        if level == reference:
            continue
        sel = (z == reference) | (z == level)
        z_bin = (z[sel] == level).astype(int)
        pairs.append((float(level), GroupedOutcomes.from_predictions(y_true[sel], y_pred[sel], z_bin)))
    return pairs


def max_pairwise(metric_fn, y_true, y_pred, z, reference) -> float:
    """Worst metric value over all (reference, level) pairs."""
    pairs = pairwise_outcomes(y_true, y_pred, z, reference)
    if not pairs:
        raise UndefinedMetricError("no non-reference levels present in z")
    return max(metric_fn(g) for _, g in pairs)
