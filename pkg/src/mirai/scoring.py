"""Direction alignment, dimension assembly, the composite index, and ranking."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DIMENSIONS
from .errors import ConfigError, MetricError
from .fairness import DISPARITY_NAMES, FairnessRecord, fairness_dimension
from .explain.quality import XaiSubscores, explainability_dimension
from .privacy import PrivacyRecord, privacy_dimension
from .robustness.drift import robustness_dimension
from .sustainability import COST_METRICS, SustainabilityRecord, sustainability_dimension

DIRECTIONS = ("higher_better", "lower_better", "cohort_cost")


@dataclass
class MetricRecord:
    name: str
    dimension: str
    raw: float
    aligned: float
    direction: str
    subcategory: str | None = None
    flags: list[str] = field(default_factory=list)


@dataclass
class DimensionScore:
    dimension: str
    score: float
    metrics: list[MetricRecord]


@dataclass
class ModelReport:
    model_id: str
    family: str
    accuracy: float
    f1: float
    train_time_seconds: float
    mirai: float
    dimensions: dict[str, DimensionScore]
    extras: dict = field(default_factory=dict)


def align(name: str, dimension: str, raw: float, direction: str,
          subcategory: str | None = None, flags=()) -> MetricRecord:
    """Build a direction-aligned record; out-of-range raw values are clamped
    with a flag, non-finite ones are hard errors naming the metric."""
    if direction not in DIRECTIONS:
        raise ConfigError(f"unknown direction {direction!r}")
    raw = float(raw)
    if math.isnan(raw) or math.isinf(raw):
        raise MetricError(f"metric {name!r} produced a non-finite raw value")
    flags = list(flags)
    if direction == "cohort_cost":
        if raw < 0:
            raise MetricError(f"metric {name!r}: cohort cost must be non-negative")
        return MetricRecord(name, dimension, raw, float("nan"), direction,
                            subcategory, flags)
    if not 0.0 <= raw <= 1.0:
        flags.append("clamped")
        raw = min(max(raw, 0.0), 1.0)
    aligned = 1.0 - raw if direction == "lower_better" else raw
    return MetricRecord(name, dimension, raw, aligned, direction, subcategory, flags)


_XAI_LAYOUT = (
    ("local_lipschitz", "lipschitz", "robustness_expl"),
    ("consistency", "consistency", "robustness_expl"),
    ("faithfulness_correlation", "faithfulness_corr", "faithfulness"),
    ("faithfulness_estimate", "faithfulness_est", "faithfulness"),
    ("param_randomization_test", "param_randomization", "randomization"),
    ("random_logit_test", "random_logit", "randomization"),
    ("sparseness", "sparseness", "complexity"),
    ("complexity_entropy", "complexity", "complexity"),
)


def explainability_scores(subs: XaiSubscores, flags=()) -> DimensionScore:
    records = []
    for name, attr, subcat in _XAI_LAYOUT:
        rec = align(name, "explainability", getattr(subs, attr), "higher_better",
                    subcategory=subcat)
        if name in ("param_randomization_test", "random_logit_test"):
            rec.flags.extend(f for f in flags if "randomization" in f)
        records.append(rec)
    shap_flags = [f for f in flags if "randomization" not in f]
    if shap_flags and records:
        records[0].flags.extend(shap_flags)
    return DimensionScore("explainability", explainability_dimension(subs), records)


def fairness_scores(record: FairnessRecord) -> DimensionScore:
    records = []
    for name in DISPARITY_NAMES:
        rec = align(name, "fairness", record.raw[name], "lower_better")
        rec.flags.extend(f for f in record.flags if name in f)
        records.append(rec)
    return DimensionScore("fairness", fairness_dimension(record), records)


def sustainability_scores(record: SustainabilityRecord) -> DimensionScore:
    records = []
    for name in COST_METRICS:
        rec = align(name, "sustainability", record.raw[name], "cohort_cost")
        rec.aligned = float(record.aligned[name])
        rec.flags.extend(f for f in record.flags if name in f)
        records.append(rec)
    return DimensionScore("sustainability", sustainability_dimension(record), records)


def robustness_scores(hsja_score: float, drift_score: float,
                      flags=()) -> DimensionScore:
    records = [
        align("hsja_robustness", "robustness", hsja_score, "higher_better",
              flags=[f for f in flags if "hsja" in f or "correct" in f]),
        align("drift_robustness", "robustness", drift_score, "higher_better",
              flags=[f for f in flags if "bandwidth" in f]),
    ]
    return DimensionScore("robustness",
                          robustness_dimension(hsja_score, drift_score), records)


def privacy_scores(record: PrivacyRecord) -> DimensionScore:
    records = [
        align("mi_privacy", "privacy", record.mi_privacy, "higher_better",
              flags=list(record.flags)),
        align("shapr_privacy", "privacy", record.shapr_privacy, "higher_better"),
    ]
    return DimensionScore("privacy", privacy_dimension(record), records)


def mirai(dimension_scores, weights) -> float:
    """Weighted sum of the five dimension scores; weights must be normalized."""
    w = dict(weights)
    missing = set(DIMENSIONS) - set(w)
    if missing:
        raise ConfigError(f"weights missing dimensions: {sorted(missing)}")
    total = sum(w.values())
    if abs(total - 1.0) > 1e-9:
        raise ConfigError("weights must sum to 1")
    if isinstance(dimension_scores, dict):
        pairs = [(d, dimension_scores[d]) for d in DIMENSIONS]
    else:
        pairs = list(zip(DIMENSIONS, dimension_scores))
    for d, s in pairs:
        s = float(s.score if isinstance(s, DimensionScore) else s)
        if math.isnan(s):
            raise MetricError(f"dimension {d!r} score is NaN")
    return float(sum(w[d] * float(s.score if isinstance(s, DimensionScore) else s)
                     for d, s in pairs))


def rank_and_compare(models: dict[str, ModelReport], target_id: str):
    """MIRAI-descending ranking (ties: F1, then id) and per-dimension deltas
    of every model against the target."""
    if target_id not in models:
        raise ConfigError(f"target model {target_id!r} missing from results")
    ranking = sorted(models, key=lambda mid: (-models[mid].mirai,
                                              -models[mid].f1, mid))
    target = models[target_id]
    deltas = {}
    for mid, rep in models.items():
        row = {d: rep.dimensions[d].score - target.dimensions[d].score
               for d in DIMENSIONS}
        row["mirai"] = rep.mirai - target.mirai
        deltas[mid] = row
    return ranking, deltas


def assemble_model_report(model_id, family, accuracy, f1, train_time_seconds,
                          dims: dict[str, DimensionScore], weights,
                          extras=None) -> ModelReport:
    missing = set(DIMENSIONS) - set(dims)
    if missing:
        raise MetricError(f"model {model_id!r} lacks dimensions {sorted(missing)}")
    score = mirai({d: dims[d].score for d in DIMENSIONS}, weights)
    for ds in dims.values():
        for rec in ds.metrics:
            if not np.isfinite(rec.aligned) or not 0.0 <= rec.aligned <= 1.0:
                raise MetricError(
                    f"metric {rec.name!r} aligned value {rec.aligned!r} out of range")
    return ModelReport(model_id=model_id, family=family, accuracy=float(accuracy),
                       f1=float(f1), train_time_seconds=float(train_time_seconds),
                       mirai=score, dimensions=dims, extras=dict(extras or {}))
