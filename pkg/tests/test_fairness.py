import numpy as np
import pytest
from hypothesis import given, strategies as st

from fairinfluence.errors import UndefinedMetricError
from fairinfluence.fairness import (
    ALL_METRICS,
    GroupCounts,
    GroupedOutcomes,
    accuracy_disparity,
    demographic_disparity,
    disparate_impact,
    equal_opportunity_diff,
    equalized_odds_gap,
    max_pairwise,
    pairwise_outcomes,
)

from . import oracles

# group0: tp=3 fp=1 tn=4 fn=2 (n=10); group1: tp=1 fp=3 tn=2 fn=2 (n=8)
PINNED = GroupedOutcomes(GroupCounts(3, 1, 4, 2), GroupCounts(1, 3, 2, 2))


class TestGroupCounts:
    def test_derived_totals(self):
        g = GroupCounts(3, 1, 4, 2)
        assert g.n == 10
        assert g.label_positives == 5
        assert g.label_negatives == 5
        assert g.predicted_positives == 4

    def test_negative_rejected(self):
        with pytest.raises(ValueError, match="nonnegative"):
            GroupCounts(-1, 0, 0, 0)

    def test_non_integer_rejected(self):
        with pytest.raises(ValueError):
            GroupCounts(1.5, 0, 0, 0)


class TestFromPredictions:
    def test_counts_match_oracle(self):
        rng = np.random.default_rng(0)
        y_true = (rng.random(60) < 0.5).astype(int)
        y_pred = (rng.random(60) < 0.5).astype(int)
        z = (rng.random(60) < 0.5).astype(int)
        g = GroupedOutcomes.from_predictions(y_true, y_pred, z)
        rates = oracles.grouped_rates(y_true, y_pred, z)
        assert g.group0.predicted_positives / g.group0.n == pytest.approx(rates[0][0])
        assert g.group1.tp / g.group1.label_positives == pytest.approx(rates[1][1])
        assert g.group0.fp / g.group0.label_negatives == pytest.approx(rates[0][2])

    def test_validation(self):
        with pytest.raises(ValueError, match="equal length"):
            GroupedOutcomes.from_predictions([0, 1], [0], [0, 1])
        with pytest.raises(ValueError, match="y_pred must contain only 0 and 1"):
            GroupedOutcomes.from_predictions([0, 1], [0, 2], [0, 1])


class TestPinnedValues:
    # rates: group0 pos 4/10, acc 7/10, tpr 3/5, fpr 1/5;
    #        group1 pos 4/8,  acc 3/8,  tpr 1/3, fpr 3/5
    def test_demographic_disparity(self):
        assert demographic_disparity(PINNED) == pytest.approx(abs(0.4 - 0.5), abs=1e-15)

    def test_disparate_impact(self):
        assert disparate_impact(PINNED) == pytest.approx(0.4 / 0.5, abs=1e-15)

    def test_equal_opportunity_diff(self):
        assert equal_opportunity_diff(PINNED) == pytest.approx(abs(3 / 5 - 1 / 3), abs=1e-15)

    def test_equalized_odds_gap(self):
        want = 0.5 * (abs(1 / 5 - 3 / 5) + abs(3 / 5 - 1 / 3))
        assert equalized_odds_gap(PINNED) == pytest.approx(want, abs=1e-15)

    def test_accuracy_disparity(self):
        assert accuracy_disparity(PINNED) == pytest.approx(abs(0.7 - 3 / 8), abs=1e-15)


class TestUndefinedStrata:
    def test_empty_group(self):
        g = GroupedOutcomes(GroupCounts(0, 0, 0, 0), GroupCounts(1, 1, 1, 1))
        with pytest.raises(UndefinedMetricError, match="demographic_disparity.*z=0"):
            demographic_disparity(g)
        with pytest.raises(UndefinedMetricError, match="accuracy_disparity"):
            accuracy_disparity(g)

    def test_no_label_positives(self):
        g = GroupedOutcomes(GroupCounts(0, 1, 1, 0), GroupCounts(1, 1, 1, 1))
        with pytest.raises(UndefinedMetricError, match="equal_opportunity_diff.*y=1"):
            equal_opportunity_diff(g)

    def test_no_label_negatives(self):
        g = GroupedOutcomes(GroupCounts(1, 0, 0, 1), GroupCounts(1, 1, 1, 1))
        with pytest.raises(UndefinedMetricError, match="equalized_odds_gap.*y=0"):
            equalized_odds_gap(g)

    def test_zero_denominator_rate(self):
        g = GroupedOutcomes(GroupCounts(1, 1, 1, 1), GroupCounts(0, 0, 3, 3))
        with pytest.raises(UndefinedMetricError, match="disparate_impact.*denominator"):
            disparate_impact(g)


counts = st.integers(0, 12)
grouped = st.builds(
    GroupedOutcomes,
    st.builds(GroupCounts, counts, counts, counts, counts),
    st.builds(GroupCounts, counts, counts, counts, counts),
)


class TestInvariances:
    @pytest.mark.parametrize("name", ["demographic_disparity", "equal_opportunity_diff", "equalized_odds_gap", "accuracy_disparity"])
    @given(g=grouped)
    def test_absolute_metrics_symmetric_under_group_swap(self, name, g):
        fn = ALL_METRICS[name]
        try:
            forward = fn(g)
        except UndefinedMetricError:
            with pytest.raises(UndefinedMetricError):
                fn(g.swapped())
            return
        assert fn(g.swapped()) == pytest.approx(forward, abs=1e-12)
        assert forward >= 0.0

    @given(g=grouped)
    def test_disparate_impact_inverts_under_group_swap(self, g):
        try:
            forward = disparate_impact(g)
        except UndefinedMetricError:
            return
        if forward == 0.0:
            with pytest.raises(UndefinedMetricError):
                disparate_impact(g.swapped())
            return
        assert disparate_impact(g.swapped()) == pytest.approx(1.0 / forward, rel=1e-12)

    def test_duplication_invariance(self):
        # Copying every row leaves all rate-based metrics unchanged.
        rng = np.random.default_rng(1)
        y_true = (rng.random(40) < 0.6).astype(int)
        y_pred = (rng.random(40) < 0.5).astype(int)
        z = (rng.random(40) < 0.5).astype(int)
        once = GroupedOutcomes.from_predictions(y_true, y_pred, z)
        twice = GroupedOutcomes.from_predictions(
            np.tile(y_true, 2), np.tile(y_pred, 2), np.tile(z, 2)
        )
        for name, fn in ALL_METRICS.items():
            assert fn(once) == fn(twice), name

    def test_perfect_parity_scores_zero(self):
        g = GroupedOutcomes(GroupCounts(2, 1, 3, 2), GroupCounts(4, 2, 6, 4))
        assert demographic_disparity(g) == 0.0
        assert disparate_impact(g) == 1.0
        assert equal_opportunity_diff(g) == 0.0
        assert equalized_odds_gap(g) == 0.0
        assert accuracy_disparity(g) == 0.0


class TestPairwise:
    def test_three_levels_give_two_pairs(self):
        y_true = np.array([1, 0, 1, 0, 1, 0, 1, 0, 1])
        y_pred = np.array([1, 0, 0, 1, 1, 1, 0, 0, 1])
        z = np.array([0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0])
        pairs = pairwise_outcomes(y_true, y_pred, z, reference=0.0)
        assert [level for level, _ in pairs] == [1.0, 2.0]
        assert pairs[0][1].group0.n == 3  # reference plays group0

    def test_max_pairwise_is_worst_pair(self):
        y_true = np.array([1, 1, 0, 0, 1, 1, 0, 0, 1, 1, 0, 0])
        y_pred = np.array([1, 1, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0])
        z = np.array([0.0] * 4 + [1.0] * 4 + [2.0] * 4)
        worst = max_pairwise(demographic_disparity, y_true, y_pred, z, reference=0.0)
        vals = [
            demographic_disparity(g)
            for _, g in pairwise_outcomes(y_true, y_pred, z, reference=0.0)
        ]
        assert worst == max(vals)
        assert worst == 1.0  # reference all-positive vs level 2 all-negative

    def test_missing_reference_rejected(self):
        with pytest.raises(ValueError, match="reference level"):
            pairwise_outcomes([0, 1], [0, 1], [1.0, 2.0], reference=0.0)

    def test_single_level_rejected(self):
        with pytest.raises(UndefinedMetricError, match="no non-reference levels"):
            max_pairwise(demographic_disparity, [0, 1], [0, 1], [1.0, 1.0], reference=1.0)
