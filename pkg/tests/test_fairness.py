"""Group statistics, disparity gaps, and the fairness dimension score."""

import numpy as np
import pytest

from mirai.errors import MetricError
from mirai.fairness import (DISPARITY_NAMES, FairnessRecord, disparities,
                            evaluate_fairness, fairness_dimension, group_stats)

# disparity profiles (acc, prec, tpr, fpr, dp, eo) with dimension scores
# recomputed independently as mean(1 - gap)
DISPARITY_CASES = [
    ((0.0020, 0.0040, 0.0020, 0.0010, 0.0010, 0.0020), 0.9980),
    ((0.0040, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000), 0.9993),
    ((0.0050, 0.2000, 0.0030, 0.0010, 0.0010, 0.0030), 0.9645),
    ((0.0040, 0.0240, 0.0020, 0.0000, 0.0000, 0.0020), 0.9947),
    ((0.0030, 0.0410, 0.0110, 0.0000, 0.0020, 0.0110), 0.9887),
    ((0.0040, 0.5000, 0.0010, 0.0010, 0.0000, 0.0010), 0.9155),
    ((0.1210, 0.0790, 0.1650, 0.0000, 0.1260, 0.1650), 0.8907),
    ((0.0550, 0.0420, 0.0650, 0.0250, 0.0690, 0.0650), 0.9465),
    ((0.0450, 0.0190, 0.1000, 0.1500, 0.1260, 0.1500), 0.9017),
    ((0.0190, 0.0160, 0.1000, 0.2000, 0.1480, 0.2000), 0.8862),
    ((0.1520, 0.0580, 0.2650, 0.1250, 0.2330, 0.2650), 0.8170),
    ((0.0620, 0.0370, 0.1000, 0.0750, 0.1050, 0.1000), 0.9202),
    ((0.1210, 0.0860, 0.0000, 0.0970, 0.1780, 0.0970), 0.9035),
    ((0.1010, 0.0590, 0.0990, 0.0630, 0.1720, 0.0990), 0.9012),
    ((0.1130, 0.0520, 0.0730, 0.0620, 0.1570, 0.0730), 0.9117),
    ((0.1150, 0.0090, 0.0490, 0.0770, 0.1720, 0.0770), 0.9168),
    ((0.1060, 0.0640, 0.0120, 0.0660, 0.1600, 0.0660), 0.9210),
    ((0.1100, 0.0050, 0.0170, 0.0480, 0.1400, 0.0480), 0.9387),
]


def _record_from_raw(raw_tuple):
    raw = dict(zip(DISPARITY_NAMES, raw_tuple))
    return FairnessRecord(raw=raw, aligned={k: 1.0 - v for k, v in raw.items()})


def test_group_stats_perfect_two_rows():
    s = group_stats([1, 0], [1, 0])
    assert (s.accuracy, s.precision, s.tpr, s.fpr) == (1.0, 1.0, 1.0, 0.0)
    assert s.selection_rate == 0.5
    assert s.degenerate == ()


def test_group_stats_no_positive_labels_or_predictions():
    s = group_stats([0, 0], [0, 0])
    assert s.accuracy == 1.0
    assert s.precision == 0.0 and "precision" in s.degenerate
    assert s.tpr == 0.0 and "tpr" in s.degenerate
    assert s.fpr == 0.0 and "fpr" not in s.degenerate


def test_group_stats_balanced_half_wrong():
    s = group_stats([1, 1, 0, 0], [1, 0, 0, 1])
    assert s.accuracy == 0.5
    assert s.precision == 0.5
    assert s.tpr == 0.5
    assert s.fpr == 0.5
    assert s.selection_rate == 0.5


def test_group_stats_empty_rejected():
    with pytest.raises(MetricError):
        group_stats([], [])


def test_group_stats_matches_naive_counting():
    rng = np.random.default_rng(31)
    for _ in range(30):
        n = int(rng.integers(2, 25))
        y = rng.integers(0, 2, n)
        p = rng.integers(0, 2, n)
        if y.sum() in (0, n):
            y[0] = 1 - y[0]
        s = group_stats(y, p)
        pos = [i for i in range(n) if y[i] == 1]
        neg = [i for i in range(n) if y[i] == 0]
        assert s.accuracy == pytest.approx(sum(y[i] == p[i] for i in range(n)) / n)
        assert s.tpr == pytest.approx(sum(p[i] == 1 for i in pos) / len(pos))
        assert s.fpr == pytest.approx(sum(p[i] == 1 for i in neg) / len(neg))
        assert s.selection_rate == pytest.approx(sum(p) / n)


@pytest.mark.parametrize("raw,expect", DISPARITY_CASES)
def test_dimension_is_mean_complement(raw, expect):
    assert fairness_dimension(_record_from_raw(raw)) == pytest.approx(expect, abs=5e-4)


@pytest.mark.parametrize("raw,expect", DISPARITY_CASES)
def test_equalized_odds_is_max_of_rate_gaps(raw, expect):
    acc, prec, tpr, fpr, dp, eo = raw
    assert eo == pytest.approx(max(tpr, fpr), abs=1e-9)


def test_disparities_swap_invariant():
    a = group_stats([1, 1, 0, 0, 1], [1, 0, 0, 1, 1])
    b = group_stats([1, 0, 0, 1], [0, 0, 1, 1])
    fwd = disparities(a, b)
    rev = disparities(b, a)
    assert fwd.raw == rev.raw


def test_disparities_hand_case():
    priv = group_stats([1, 1, 0, 0], [1, 1, 0, 0])   # perfect
    unpriv = group_stats([1, 1, 0, 0], [1, 0, 0, 1])  # half wrong
    rec = disparities(priv, unpriv)
    assert rec.raw["accuracy_diff"] == pytest.approx(0.5)
    assert rec.raw["precision_diff"] == pytest.approx(0.5)
    assert rec.raw["tpr_diff"] == pytest.approx(0.5)
    assert rec.raw["fpr_diff"] == pytest.approx(0.5)
    assert rec.raw["demographic_parity_diff"] == pytest.approx(0.0)
    assert rec.raw["equalized_odds_diff"] == pytest.approx(0.5)
    assert fairness_dimension(rec) == pytest.approx(1.0 - 2.5 / 6.0)


def test_degenerate_rate_zeroes_gap_and_flags():
    priv = group_stats([0, 0, 0], [0, 0, 0])      # no positives: tpr undefined
    unpriv = group_stats([1, 1, 0], [1, 0, 0])
    rec = disparities(priv, unpriv)
    assert rec.raw["tpr_diff"] == 0.0
    assert "degenerate_tpr_diff" in rec.flags
    assert "degenerate_precision_diff" in rec.flags
    assert rec.raw["equalized_odds_diff"] == rec.raw["fpr_diff"]


def test_zero_gaps_score_one():
    s = group_stats([1, 0, 1], [1, 0, 1])
    rec = disparities(s, s)
    assert fairness_dimension(rec) == 1.0


def test_aligned_complements_raw():
    rng = np.random.default_rng(9)
    for _ in range(20):
        y1, p1 = rng.integers(0, 2, 12), rng.integers(0, 2, 12)
        y2, p2 = rng.integers(0, 2, 9), rng.integers(0, 2, 9)
        rec = disparities(group_stats(y1, p1), group_stats(y2, p2))
        for k in DISPARITY_NAMES:
            assert rec.aligned[k] == pytest.approx(1.0 - rec.raw[k])
            assert 0.0 <= rec.raw[k] <= 1.0


class _Fixed:
    def __init__(self, preds):
        self._p = np.asarray(preds)

    def predict(self, X):
        return self._p


def test_evaluate_fairness_end_to_end():
    y = np.array([1, 1, 0, 0, 1, 0])
    preds = np.array([1, 0, 0, 1, 1, 0])
    X = np.zeros((6, 2))
    rec, priv, unpriv = evaluate_fairness(_Fixed(preds), X, y,
                                          priv_idx=[0, 1, 2], unpriv_idx=[3, 4, 5])
    assert priv.accuracy == pytest.approx(2 / 3)
    assert unpriv.accuracy == pytest.approx(2 / 3)
    assert rec.raw["accuracy_diff"] == pytest.approx(0.0)
    assert rec.raw["tpr_diff"] == pytest.approx(abs(1 / 2 - 1 / 1))


def test_evaluate_fairness_empty_group():
    with pytest.raises(MetricError):
        evaluate_fairness(_Fixed([1, 0]), np.zeros((2, 2)), [1, 0], [0, 1], [])
