"""Subgroup confusion statistics and disparity-based fairness scoring."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import MetricError

DISPARITY_NAMES = ("accuracy_diff", "precision_diff", "tpr_diff", "fpr_diff",
                   "demographic_parity_diff", "equalized_odds_diff")


@dataclass(frozen=True)
class GroupStats:
    """Confusion-matrix rates for one group.

    A rate whose denominator is zero is reported as 0 and named in
    ``degenerate`` so downstream aggregation stays defined while the report
    can still surface the condition.
    """

    n: int
    accuracy: float
    precision: float
    tpr: float
    fpr: float
    selection_rate: float
    degenerate: tuple[str, ...] = ()


@dataclass
class FairnessRecord:
    raw: dict[str, float]
    aligned: dict[str, float]
    flags: list[str] = field(default_factory=list)


def group_stats(y_true, y_pred) -> GroupStats:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise MetricError("fairness: label and prediction shapes disagree")
    n = y_true.shape[0]
    if n == 0:
        raise MetricError("fairness: empty group partition")
    tp = int(np.sum((y_pred == 1) & (y_true == 1)))
    fp = int(np.sum((y_pred == 1) & (y_true == 0)))
    fn = int(np.sum((y_pred == 0) & (y_true == 1)))
    tn = int(np.sum((y_pred == 0) & (y_true == 0)))
    degenerate = []

    def rate(num, den, name):
        if den == 0:
            degenerate.append(name)
            return 0.0
        return num / den

    stats = GroupStats(
        n=n,
        accuracy=(tp + tn) / n,
        precision=rate(tp, tp + fp, "precision"),
        tpr=rate(tp, tp + fn, "tpr"),
        fpr=rate(fp, fp + tn, "fpr"),
        selection_rate=(tp + fp) / n,
        degenerate=tuple(degenerate),
    )
    return stats


def disparities(privileged: GroupStats, unprivileged: GroupStats) -> FairnessRecord:
    """Six absolute inter-group gaps; any gap touching a degenerate rate is
    zeroed and flagged rather than propagated."""
    flags = []

    def diff(attr, name):
        bad = attr in privileged.degenerate or attr in unprivileged.degenerate
        if bad:
            flags.append(f"degenerate_{name}")
            return 0.0
        return abs(getattr(privileged, attr) - getattr(unprivileged, attr))

    raw = {
        "accuracy_diff": abs(privileged.accuracy - unprivileged.accuracy),
        "precision_diff": diff("precision", "precision_diff"),
        "tpr_diff": diff("tpr", "tpr_diff"),
        "fpr_diff": diff("fpr", "fpr_diff"),
        "demographic_parity_diff": abs(privileged.selection_rate
                                       - unprivileged.selection_rate),
    }
    raw["equalized_odds_diff"] = max(raw["tpr_diff"], raw["fpr_diff"])
    aligned = {k: 1.0 - v for k, v in raw.items()}
    return FairnessRecord(raw=raw, aligned=aligned, flags=flags)


def fairness_dimension(record: FairnessRecord) -> float:
    """Mean of 1 - raw over the six disparities."""
    return float(np.mean([record.aligned[k] for k in DISPARITY_NAMES]))


def evaluate_fairness(handle, X, y, priv_idx, unpriv_idx):
    """Disparity record for one model on held-out rows split by group."""
    priv_idx = np.asarray(priv_idx)
    unpriv_idx = np.asarray(unpriv_idx)
    if len(priv_idx) == 0 or len(unpriv_idx) == 0:
        raise MetricError("fairness: empty group partition")
    pred = handle.predict(X)
    y = np.asarray(y, dtype=np.int64)
    priv = group_stats(y[priv_idx], pred[priv_idx])
    unpriv = group_stats(y[unpriv_idx], pred[unpriv_idx])
    record = disparities(priv, unpriv)
    return record, priv, unpriv
