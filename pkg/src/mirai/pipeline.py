"""End-to-end evaluation: data preparation, per-model metrics, cohort report."""

from __future__ import annotations

import datetime as _dt
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .config import RunConfig, config_hash
from .data import ingest_csv, split, standardize
from .errors import ConfigError
from .explain.evaluate import evaluate_explainability
from .fairness import evaluate_fairness
from .models import accuracy_f1, build_model
from .models.external import PredictionFileModel
from .privacy import evaluate_privacy, knn_shapley
from .report import MiraiReport, determinism_hash
from .robustness.drift import DriftLadder, drift_robustness
from .robustness.hsja import AttackBudget, hsja_robustness_score
from .scoring import (assemble_model_report, explainability_scores,
                      fairness_scores, privacy_scores, rank_and_compare,
                      robustness_scores, sustainability_scores)
from .seeding import derive_rng, derive_seed
from .sustainability import SustainabilityRecord, align_cohort, raw_costs

# flags that signal a degraded computation rather than an expected condition
WARNING_FLAGS = ("clamped", "shap_ridge_fallback", "bandwidth_fallback",
                 "degenerate_", "small_membership_eval_set", "all_zero_cohort",
                 "no_correct_predictions")


@dataclass
class PreparedData:
    dataset_name: str
    X_train: np.ndarray
    y_train: np.ndarray
    X_test: np.ndarray
    y_test: np.ndarray
    priv_test: np.ndarray
    unpriv_test: np.ndarray
    explain_rows: np.ndarray
    background: np.ndarray
    warnings: list[str]


def prepare_data(cfg: RunConfig) -> PreparedData:
    ds = ingest_csv(cfg.dataset_path, cfg.schema, name=cfg.dataset_name)
    warnings = list(cfg.warnings)
    if getattr(ds, "n_rejected_rows", 0):
        warnings.append(f"{ds.n_rejected_rows} rows dropped for missing values")
    train_idx, test_idx = split(ds, cfg.split)
    ds_std = standardize(ds, train_idx)

    if cfg.sensitive.privileged_value not in ds.sensitive_values:
        raise ConfigError(
            f"privileged value {cfg.sensitive.privileged_value!r} not in data")
    if cfg.sensitive.unprivileged_value not in ds.sensitive_values:
        raise ConfigError(
            f"unprivileged value {cfg.sensitive.unprivileged_value!r} not in data")
    priv_code = ds.sensitive_values.index(cfg.sensitive.privileged_value)
    unpriv_code = ds.sensitive_values.index(cfg.sensitive.unprivileged_value)
    sens_test = ds.sensitive[test_idx]
    priv_test = np.flatnonzero(sens_test == priv_code)
    unpriv_test = np.flatnonzero(sens_test == unpriv_code)
    excluded = len(test_idx) - len(priv_test) - len(unpriv_test)
    if len(priv_test) == 0 or len(unpriv_test) == 0:
        raise ConfigError("a sensitive group is empty on the held-out split")
    if excluded:
        warnings.append(f"{excluded} held-out rows outside both sensitive groups")

    X_train = ds_std.features[train_idx]
    y_train = ds_std.labels[train_idx]
    X_test = ds_std.features[test_idx]
    y_test = ds_std.labels[test_idx]

    n_explain = min(cfg.explain["n_explain"], X_test.shape[0])
    rows_rng = derive_rng(cfg.seed, "xai-rows")
    explain_rows = np.sort(rows_rng.permutation(X_test.shape[0])[:n_explain])
    n_bg = min(cfg.explain["n_background"], X_train.shape[0])
    bg_rng = derive_rng(cfg.seed, "xai-background")
    background = X_train[np.sort(bg_rng.permutation(X_train.shape[0])[:n_bg])]

    return PreparedData(ds.name, X_train, y_train, X_test, y_test, priv_test,
                        unpriv_test, explain_rows, background, warnings)


def check_evaluable(cfg: RunConfig) -> None:
    """Reject configurations the five-dimension pipeline cannot serve."""
    for spec in cfg.models:
        if spec.kind == "external_file":
            raise ConfigError(
                f"model {spec.name!r}: prediction-file adapters cannot answer "
                "the synthesized queries the metric stack makes; use "
                "external_command for full evaluation")
        if spec.kind == "external_command" and spec.resources is None:
            raise ConfigError(
                f"model {spec.name!r}: external models need declared resources "
                "(parameter_count, macs_per_sample) for sustainability scoring")


def _evaluate_one(cfg: RunConfig, data: PreparedData, spec, knn_values):
    handle = build_model(spec, seed=derive_seed(cfg.seed, "model", spec.name))
    if isinstance(handle, PredictionFileModel):
        handle.bind_split("train", data.X_train)
        handle.bind_split("test", data.X_test)
    handle.fit(data.X_train, data.y_train)
    acc, f1 = accuracy_f1(handle, data.X_test, data.y_test)

    subs, xai_flags = evaluate_explainability(
        handle, data.X_test[data.explain_rows], data.background, cfg.explain,
        derive_seed(cfg.seed, "xai"))

    fair_record, _, _ = evaluate_fairness(handle, data.X_test, data.y_test,
                                          data.priv_test, data.unpriv_test)

    budget = AttackBudget(max_queries=cfg.attack["query_budget"],
                          epsilon=cfg.attack["epsilon"],
                          n_eval_points=cfg.attack["n_points"],
                          seed=cfg.seed,
                          init_trials=cfg.attack["init_trials"],
                          boundary_tol=cfg.attack["boundary_tol"],
                          grad_samples=cfg.attack["grad_samples"],
                          iterations=cfg.attack["iterations"])
    hsja_score, hsja_details, hsja_flags = hsja_robustness_score(
        handle, data.X_test, data.y_test, budget, seed=derive_seed(cfg.seed, "hsja"))
    ladder = DriftLadder(noise_levels=tuple(cfg.drift["noise_levels"]),
                         n_permutations=cfg.drift["n_permutations"],
                         max_points=cfg.drift["max_points"])
    drift = drift_robustness(handle, data.X_test, ladder,
                             seed=derive_seed(cfg.seed, "drift"))

    privacy_record = evaluate_privacy(handle, data.X_train, data.y_train,
                                      data.X_test, data.y_test, cfg.privacy,
                                      seed=derive_seed(cfg.seed, "privacy"),
                                      knn_values=knn_values)

    # resource accounting happens after every dimension has queried the model
    costs, cost_flags = raw_costs(handle, cfg.emissions)

    dims = {
        "explainability": explainability_scores(subs, xai_flags),
        "fairness": fairness_scores(fair_record),
        "robustness": robustness_scores(hsja_score, drift.score,
                                        hsja_flags + drift.flags),
        "privacy": privacy_scores(privacy_record),
    }
    extras = {
        "attack_accuracy": float(privacy_record.attack_accuracy),
        "xai_subcategories": {k: float(v)
                              for k, v in subs.subcategories().items()},
        "drift_level_pvalues": [float(p) for p in drift.level_pvalues],
        "hsja_queries_total": int(sum(r["queries"] for r in hsja_details)),
        "n_model_queries": int(handle.n_predict_rows),
    }
    sustain = SustainabilityRecord(raw=costs, flags=list(cost_flags))
    return {
        "handle": handle, "accuracy": acc, "f1": f1, "dims": dims,
        "sustain": sustain, "extras": extras,
    }


def evaluate_run(cfg: RunConfig, workers: int = 1) -> MiraiReport:
    """Train and score every configured model, then assemble the ranked report."""
    started = time.perf_counter()
    check_evaluable(cfg)
    data = prepare_data(cfg)

    knn_eval = min(data.X_train.shape[0], cfg.privacy["max_valuation_points"])
    eval_idx = np.sort(derive_rng(derive_seed(cfg.seed, "privacy"), "shapr-eval")
                       .permutation(data.X_train.shape[0])[:knn_eval])
    knn_values = knn_shapley(data.X_train, data.y_train, cfg.privacy["knn_k"],
                             eval_idx)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_evaluate_one, cfg, data, spec, knn_values)
                       for spec in cfg.models]
            raw_results = [f.result() for f in futures]
    else:
        raw_results = [_evaluate_one(cfg, data, spec, knn_values)
                       for spec in cfg.models]
    results = {spec.name: r for spec, r in zip(cfg.models, raw_results)}

    align_cohort({name: r["sustain"] for name, r in results.items()})

    models = {}
    for spec in cfg.models:
        r = results[spec.name]
        dims = dict(r["dims"])
        dims["sustainability"] = sustainability_scores(r["sustain"])
        models[spec.name] = assemble_model_report(
            spec.name, r["handle"].family, r["accuracy"], r["f1"],
            r["handle"].train_time_seconds, dims, cfg.weights.weights,
            extras=r["extras"])

    ranking, deltas = rank_and_compare(models, cfg.target_model)
    report = MiraiReport(
        dataset=data.dataset_name, target_model=cfg.target_model, seed=cfg.seed,
        weights=dict(cfg.weights.weights), config_hash=config_hash(cfg),
        models=models, ranking=ranking, deltas=deltas,
        warnings=list(data.warnings))
    report.determinism_hash = determinism_hash(report)
    report.meta = {
        "created_at": _dt.datetime.now(_dt.timezone.utc).isoformat(),
        "wall_time_seconds": time.perf_counter() - started,
    }
    return report


def has_warning_conditions(report: MiraiReport) -> bool:
    if report.warnings:
        return True
    for rep in report.models.values():
        for ds in rep.dimensions.values():
            for rec in ds.metrics:
                for flag in rec.flags:
                    if any(flag.startswith(w) for w in WARNING_FLAGS):
                        return True
    return False
