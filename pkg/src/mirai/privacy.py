"""Membership-inference and data-valuation privacy metrics."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MetricError
from .seeding import derive_rng


@dataclass(frozen=True)
class MembershipEvalSet:
    member_stats: np.ndarray
    non_member_stats: np.ndarray

    def __post_init__(self):
        if self.member_stats.shape != self.non_member_stats.shape:
            raise MetricError("membership eval set must be balanced")


@dataclass
class PrivacyRecord:
    mi_privacy: float
    shapr_privacy: float
    attack_accuracy: float
    per_record_values: np.ndarray | None = None
    flags: list[str] = field(default_factory=list)


def true_label_confidence(handle, X, y) -> np.ndarray:
    p = handle.predict_proba(X)
    y = np.asarray(y, dtype=np.int64)
    return np.where(y == 1, p, 1.0 - p)


def threshold_attack_accuracy(member_stats, non_member_stats) -> float:
    """Best balanced accuracy over every threshold and both decision
    directions; the sweep covers midpoints of adjacent distinct statistics
    plus sentinels outside the observed range."""
    m = np.asarray(member_stats, dtype=np.float64).reshape(-1)
    n = np.asarray(non_member_stats, dtype=np.float64).reshape(-1)
    if m.size == 0 or n.size == 0:
        raise MetricError("membership attack needs non-empty statistic sets")
    u = np.unique(np.concatenate([m, n]))
    mids = (u[:-1] + u[1:]) / 2.0 if u.size > 1 else np.empty(0)
    thresholds = np.concatenate([[u[0] - 1.0], mids, [u[-1] + 1.0]])
    m_sorted = np.sort(m)
    n_sorted = np.sort(n)
    # members >= t direction
    tpr = 1.0 - np.searchsorted(m_sorted, thresholds, side="left") / m.size
    tnr = np.searchsorted(n_sorted, thresholds, side="left") / n.size
    acc_ge = (tpr + tnr) / 2.0
    best = max(float(acc_ge.max()), float((1.0 - acc_ge).max()))
    return best


def mi_attack(eval_set: MembershipEvalSet):
    """attack_accuracy and mi_privacy = 1 - max(0, 2*accuracy - 1)."""
    flags = []
    if eval_set.member_stats.size < 10:
        flags.append("small_membership_eval_set")
    acc = threshold_attack_accuracy(eval_set.member_stats, eval_set.non_member_stats)
    privacy = 1.0 - max(0.0, 2.0 * acc - 1.0)
    return acc, privacy, flags


def _knn_match_utility(matches, k):
    take = matches[:k]
    return float(take.sum()) / k


def knn_shapley(X, y, k: int = 5, eval_idx=None) -> np.ndarray:
    """Exact KNN-Shapley value per training record.

    Every evaluation point scores all other records (leave-one-out), ranked
    by Euclidean distance with index order breaking ties. The descending
    recursion runs in O(n log n) per evaluation point. A record's output is
    its mean value over the evaluation points where it participated.
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    n = X.shape[0]
    if k < 1:
        raise MetricError("knn_shapley needs k >= 1")
    if n < 2:
        raise MetricError("knn_shapley needs at least two records")
    eval_idx = np.arange(n) if eval_idx is None else np.asarray(eval_idx)
    totals = np.zeros(n)
    counts = np.zeros(n)
    for t in eval_idx:
        cand = np.concatenate([np.arange(t), np.arange(t + 1, n)])
        diffs = X[cand] - X[t]
        dists = np.einsum("ij,ij->i", diffs, diffs)
        order = cand[np.lexsort((cand, dists))]
        match = (y[order] == y[t]).astype(np.float64)
        m = order.shape[0]
        sv = np.empty(m)
        sv[m - 1] = match[m - 1] / m
        ranks = np.arange(1, m, dtype=np.float64)
        steps = (match[:-1] - match[1:]) / k * np.minimum(k, ranks) / ranks
        sv[:-1] = steps[::-1].cumsum()[::-1] + sv[m - 1]
        totals[order] += sv
        counts[order] += 1.0
    if np.any(counts == 0):
        raise MetricError("knn_shapley: a record appeared in no evaluation")
    return totals / counts


def shapr_privacy(values) -> float:
    """Per-record risk = positive value over the largest positive value;
    privacy = 1 - mean risk. All-non-positive values mean no record stands
    out, which scores 1."""
    v = np.asarray(values, dtype=np.float64).reshape(-1)
    if v.size == 0:
        raise MetricError("shapr_privacy needs at least one value")
    top = v.max()
    if top <= 0.0:
        return 1.0
    risks = np.clip(v, 0.0, None) / top
    return float(1.0 - risks.mean())


def privacy_dimension(record: PrivacyRecord) -> float:
    return float((record.mi_privacy + record.shapr_privacy) / 2.0)


def evaluate_privacy(handle, X_train, y_train, X_test, y_test, options,
                     seed: int = 0, knn_values=None) -> PrivacyRecord:
    """Both privacy metrics for one trained model.

    ``knn_values`` lets a caller reuse the model-independent per-record
    valuation across a cohort instead of recomputing it for every model.
    """
    X_train = np.asarray(X_train, dtype=np.float64)
    X_test = np.asarray(X_test, dtype=np.float64)
    n_each = min(X_train.shape[0], X_test.shape[0], options["max_shadow_points"])
    pick_m = derive_rng(seed, "mi-members")
    pick_n = derive_rng(seed, "mi-non-members")
    m_idx = np.sort(pick_m.permutation(X_train.shape[0])[:n_each])
    n_idx = np.sort(pick_n.permutation(X_test.shape[0])[:n_each])
    eval_set = MembershipEvalSet(
        member_stats=true_label_confidence(handle, X_train[m_idx], y_train[m_idx]),
        non_member_stats=true_label_confidence(handle, X_test[n_idx], y_test[n_idx]))
    acc, mi_priv, flags = mi_attack(eval_set)

    if knn_values is None:
        n_eval = min(X_train.shape[0], options["max_valuation_points"])
        pick_e = derive_rng(seed, "shapr-eval")
        eval_idx = np.sort(pick_e.permutation(X_train.shape[0])[:n_eval])
        values = knn_shapley(X_train, y_train, options["knn_k"], eval_idx)
    else:
        values = np.asarray(knn_values, dtype=np.float64)
    shapr = shapr_privacy(values)
    return PrivacyRecord(mi_privacy=float(mi_priv), shapr_privacy=float(shapr),
                         attack_accuracy=float(acc), per_record_values=values,
                         flags=flags)
