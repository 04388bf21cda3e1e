"""Detection and retention metrics against brute-force oracles."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uncq import (
    DetectionSet,
    OneClassOnlyError,
    RetentionSet,
    auarc,
    aupr,
    auroc,
    fpr_at_tpr,
    retention_curve,
)


def pair_wins(scores, flags):
    """Half-integer win count over all positive-negative pairs (exact)."""
    pos = [s for s, f in zip(scores, flags) if f]
    neg = [s for s, f in zip(scores, flags) if not f]
    total = 0.0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                total += 1.0
            elif sp == sn:
                total += 0.5
    return total


def auroc_pair_counting(scores, flags):
    """O(P*N) oracle: wins + half-ties over all positive-negative pairs."""
    pos = sum(1 for f in flags if f)
    return pair_wins(scores, flags) / (pos * (len(flags) - pos))


def aupr_enumeration(scores, flags):
    """PR-curve oracle: walk distinct thresholds descending, sum dR * P."""
    pos = sum(flags)
    out, prev_recall = 0.0, 0.0
    for t in sorted(set(scores), reverse=True):
        tp = sum(1 for s, f in zip(scores, flags) if f and s >= t)
        fp = sum(1 for s, f in zip(scores, flags) if not f and s >= t)
        recall = tp / pos
        precision = tp / (tp + fp)
        out += (recall - prev_recall) * precision
        prev_recall = recall
    return out


def fpr_enumeration(scores, flags, level):
    pos = sum(flags)
    neg = len(flags) - pos
    best = None
    for t in sorted(set(scores), reverse=True):
        tp = sum(1 for s, f in zip(scores, flags) if f and s >= t)
        fp = sum(1 for s, f in zip(scores, flags) if not f and s >= t)
        if tp / pos >= level:
            fpr = fp / neg
            best = fpr if best is None else min(best, fpr)
    return best


def random_detection(rng, n=None):
    n = n or int(rng.integers(2, 60))
    scores = rng.choice([-1.5, 0.0, 0.25, 0.5, 1.0, 2.0, math.inf], size=n)
    flags = rng.integers(0, 2, size=n).astype(bool)
    if not flags.any():
        flags[0] = True
    if flags.all():
        flags[-1] = False
    return scores, flags


class TestAuroc:
    def test_perfect_separation(self):
        d = DetectionSet([0.3, 0.4, 0.1, 0.2], [True, True, False, False])
        assert auroc(d) == 1.0

    def test_all_ties(self):
        d = DetectionSet([0.5, 0.5, 0.5], [True, False, True])
        assert auroc(d) == 0.5

    def test_three_wins_one_loss(self):
        d = DetectionSet([0.4, 0.6, 0.2, 0.5], [True, True, False, False])
        assert auroc(d) == 0.75

    def test_one_class_only(self):
        with pytest.raises(OneClassOnlyError):
            auroc(DetectionSet([0.1, 0.2], [True, True]))

    def test_infinite_scores(self):
        d = DetectionSet([math.inf, 1.0, math.inf], [True, False, False])
        # inf ties with inf (0.5), beats 1.0 (1) -> (0.5 + 1) / 2
        assert auroc(d) == 0.75

    def test_matches_pair_counting_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(300):
            scores, flags = random_detection(rng)
            d = DetectionSet(scores, flags)
            assert auroc(d) == auroc_pair_counting(list(scores), list(flags))

    def test_flip_property_without_ties(self):
        """auroc(-s) = 1 - auroc(s) on tie-free data.

        The identity is exact in rational arithmetic; asserting it on the two
        float divisions allows their final rounding (one ulp), while the
        underlying pair counts satisfy it exactly.
        """
        rng = np.random.default_rng(22)
        for _ in range(200):
            n = int(rng.integers(2, 80))
            scores = rng.permutation(np.arange(n)).astype(float)
            flags = rng.integers(0, 2, size=n).astype(bool)
            if not flags.any():
                flags[0] = True
            if flags.all():
                flags[-1] = False
            d = DetectionSet(scores, flags)
            d_neg = DetectionSet(-scores, flags)
            assert auroc(d_neg) == pytest.approx(1.0 - auroc(d), abs=1e-15)
            pos, neg = int(flags.sum()), int((~flags).sum())
            wins = pair_wins(list(scores), list(flags))
            wins_neg = pair_wins(list(-scores), list(flags))
            assert wins + wins_neg == pos * neg  # exact: half-integer counts

    @given(
        st.lists(
            st.tuples(st.integers(min_value=-5, max_value=5), st.booleans()),
            min_size=2,
            max_size=200,
        )
    )
    @settings(max_examples=200, deadline=None)
    def test_pair_counting_exact_up_to_200_items(self, pairs):
        scores = [float(s) for s, _ in pairs]
        flags = [f for _, f in pairs]
        if not any(flags) or all(flags):
            return
        d = DetectionSet(scores, flags)
        assert auroc(d) == auroc_pair_counting(scores, flags)


class TestAupr:
    def test_perfect(self):
        assert aupr(DetectionSet([0.9, 0.1], [True, False])) == 1.0

    def test_reversed_pair(self):
        assert aupr(DetectionSet([0.1, 0.9], [True, False])) == 0.5

    def test_three_item_case(self):
        # precisions at recalls {0.5, 1} are 1 and 2/3
        got = aupr(DetectionSet([0.8, 0.6, 0.7], [True, True, False]))
        assert got == pytest.approx((1 + 2 / 3) / 2)

    def test_matches_enumeration_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(300):
            scores, flags = random_detection(rng)
            d = DetectionSet(scores, flags)
            assert aupr(d) == pytest.approx(
                aupr_enumeration(list(scores), list(flags)), abs=1e-12
            )

    def test_one_class_only(self):
        with pytest.raises(OneClassOnlyError):
            aupr(DetectionSet([0.1], [True]))


class TestFprAtTpr:
    def test_perfect_separation(self):
        d = DetectionSet([1.0, 0.9, 0.1, 0.2], [True, True, False, False])
        assert fpr_at_tpr(d) == 0.0

    def test_all_ties(self):
        d = DetectionSet([0.5, 0.5, 0.5, 0.5], [True, True, False, False])
        assert fpr_at_tpr(d) == 1.0

    def test_hand_case(self):
        # reaching 95% TPR forces the threshold down to score 1
        d = DetectionSet([2.0, 1.0, 1.5], [True, True, False])
        assert fpr_at_tpr(d, 0.95) == 1.0

    def test_monotone_in_level(self):
        rng = np.random.default_rng(24)
        for _ in range(100):
            scores, flags = random_detection(rng)
            d = DetectionSet(scores, flags)
            levels = sorted(rng.uniform(0.05, 1.0, size=4))
            values = [fpr_at_tpr(d, lv) for lv in levels]
            assert all(a <= b for a, b in zip(values, values[1:]))

    def test_matches_enumeration_oracle(self):
        rng = np.random.default_rng(25)
        for _ in range(200):
            scores, flags = random_detection(rng)
            d = DetectionSet(scores, flags)
            assert fpr_at_tpr(d, 0.5) == fpr_enumeration(list(scores), list(flags), 0.5)

    def test_bad_level(self):
        d = DetectionSet([1.0, 0.0], [True, False])
        with pytest.raises(ValueError):
            fpr_at_tpr(d, 0.0)


class TestRetentionCurve:
    def test_all_correct(self):
        curve = retention_curve(RetentionSet([3.0, 1.0, 2.0], [True, True, True]))
        assert np.all(curve[:, 1] == 1.0)

    def test_counting_case(self):
        curve = retention_curve(RetentionSet([1, 2, 3, 4], [True, True, True, False]))
        np.testing.assert_array_equal(
            curve, [[0.25, 1.0], [0.5, 1.0], [0.75, 1.0], [1.0, 0.75]]
        )

    def test_single_item(self):
        curve = retention_curve(RetentionSet([5.0], [True]))
        np.testing.assert_array_equal(curve, [[1.0, 1.0]])

    def test_final_point_is_overall_accuracy(self):
        rng = np.random.default_rng(26)
        for _ in range(100):
            n = int(rng.integers(1, 50))
            scores = rng.normal(size=n)
            correct = rng.integers(0, 2, size=n).astype(bool)
            curve = retention_curve(RetentionSet(scores, correct))
            assert curve[-1, 0] == 1.0
            assert curve[-1, 1] == correct.mean()

    def test_stable_tie_break_uses_input_order(self):
        curve = retention_curve(RetentionSet([1.0, 1.0], [False, True]))
        np.testing.assert_array_equal(curve, [[0.5, 0.0], [1.0, 0.5]])


class TestAuarc:
    def test_all_correct(self):
        assert auarc(RetentionSet([1.0, 2.0], [True, True])) == 1.0

    def test_all_incorrect(self):
        assert auarc(RetentionSet([1.0, 2.0], [False, False])) == 0.0

    def test_hand_trapezoid(self):
        # (0.5, 1), (0.75, 1), (1.0, 0.75): (0.25 + 0.25 * 0.875) / 0.5
        r = RetentionSet([1, 2, 3, 4], [True, True, True, False])
        assert auarc(r, 0.5) == pytest.approx(0.9375, abs=1e-12)

    def test_left_extension(self):
        # n = 3, f_min = 0.5: fractions {2/3, 1} extend left at the 2/3 value
        r = RetentionSet([1.0, 2.0, 3.0], [True, True, False])
        want = ((2 / 3 - 0.5) * 1.0 + (1 / 3) * (1.0 + 2 / 3) / 2.0) / 0.5
        assert auarc(r, 0.5) == pytest.approx(want, rel=1e-12)

    def test_within_accuracy_envelope(self):
        rng = np.random.default_rng(27)
        for _ in range(200):
            n = int(rng.integers(1, 60))
            scores = rng.normal(size=n)
            correct = rng.integers(0, 2, size=n).astype(bool)
            r = RetentionSet(scores, correct)
            f_min = float(rng.choice([0.0, 0.25, 0.5, 0.8]))
            curve = retention_curve(r)
            m_lo = max(1, math.ceil(f_min * n))
            included = curve[m_lo - 1 :, 1]
            value = auarc(r, f_min)
            assert included.min() - 1e-12 <= value <= included.max() + 1e-12

    def test_bad_fmin(self):
        with pytest.raises(ValueError):
            auarc(RetentionSet([1.0], [True]), 1.0)


class TestValidation:
    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            DetectionSet([1.0, 2.0], [True])

    def test_nan_rejected(self):
        with pytest.raises(ValueError):
            DetectionSet([math.nan, 1.0], [True, False])

    def test_empty_retention_rejected(self):
        with pytest.raises(ValueError):
            RetentionSet([], [])
