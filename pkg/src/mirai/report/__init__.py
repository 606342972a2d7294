"""Report data model: serialization, determinism hashing, tables, CSV."""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from ..config import DIMENSIONS
from ..errors import DataError
from ..scoring import DimensionScore, MetricRecord, ModelReport

SCHEMA_VERSION = 1

DIMENSION_TITLES = {
    "explainability": "Explainability",
    "fairness": "Fairness",
    "sustainability": "Sustainability",
    "robustness": "Robustness",
    "privacy": "Privacy",
}


@dataclass
class MiraiReport:
    dataset: str
    target_model: str
    seed: int
    weights: dict[str, float]
    config_hash: str
    models: dict[str, ModelReport]
    ranking: list[str]
    deltas: dict[str, dict[str, float]]
    warnings: list[str] = field(default_factory=list)
    determinism_hash: str = ""
    meta: dict = field(default_factory=dict)


def _record_dict(rec: MetricRecord) -> dict:
    return {
        "name": rec.name,
        "dimension": rec.dimension,
        "subcategory": rec.subcategory,
        "raw": rec.raw,
        "aligned": rec.aligned,
        "direction": rec.direction,
        "flags": list(rec.flags),
    }


def _model_dict(rep: ModelReport) -> dict:
    # train time is a wall-clock measurement; it lives in meta so the
    # deterministic payload stays identical across same-seed runs
    return {
        "model_id": rep.model_id,
        "family": rep.family,
        "accuracy": rep.accuracy,
        "f1": rep.f1,
        "mirai": rep.mirai,
        "dimensions": {
            d: {
                "score": ds.score,
                "metrics": [_record_dict(r) for r in ds.metrics],
            }
            for d, ds in rep.dimensions.items()
        },
        "extras": rep.extras,
    }


def report_payload(report: MiraiReport) -> dict:
    """Everything the determinism contract covers; meta stays outside."""
    return {
        "schema_version": SCHEMA_VERSION,
        "dataset": report.dataset,
        "target_model": report.target_model,
        "seed": report.seed,
        "weights": report.weights,
        "config_hash": report.config_hash,
        "models": {mid: _model_dict(rep) for mid, rep in report.models.items()},
        "ranking": list(report.ranking),
        "deltas": report.deltas,
        "warnings": list(report.warnings),
    }


def determinism_hash(report: MiraiReport) -> str:
    text = json.dumps(report_payload(report), sort_keys=True, allow_nan=False)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def to_document(report: MiraiReport) -> dict:
    doc = report_payload(report)
    doc["determinism_hash"] = report.determinism_hash or determinism_hash(report)
    meta = dict(report.meta)
    meta["train_time_seconds"] = {mid: rep.train_time_seconds
                                  for mid, rep in report.models.items()}
    doc["meta"] = meta
    return doc


def _record_from_dict(d) -> MetricRecord:
    return MetricRecord(name=d["name"], dimension=d["dimension"], raw=d["raw"],
                        aligned=d["aligned"], direction=d["direction"],
                        subcategory=d.get("subcategory"),
                        flags=list(d.get("flags", [])))


def from_document(doc: dict) -> MiraiReport:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise DataError(f"unsupported report schema {doc.get('schema_version')!r}")
    models = {}
    times = doc.get("meta", {}).get("train_time_seconds", {})
    for mid, m in doc["models"].items():
        dims = {}
        for dname, dd in m["dimensions"].items():
            dims[dname] = DimensionScore(
                dimension=dname, score=dd["score"],
                metrics=[_record_from_dict(r) for r in dd["metrics"]])
        models[mid] = ModelReport(
            model_id=m["model_id"], family=m["family"], accuracy=m["accuracy"],
            f1=m["f1"], train_time_seconds=float(times.get(mid, 0.0)),
            mirai=m["mirai"], dimensions=dims, extras=dict(m.get("extras", {})))
    return MiraiReport(
        dataset=doc["dataset"], target_model=doc["target_model"], seed=doc["seed"],
        weights=dict(doc["weights"]), config_hash=doc["config_hash"], models=models,
        ranking=list(doc["ranking"]), deltas=doc["deltas"],
        warnings=list(doc.get("warnings", [])),
        determinism_hash=doc.get("determinism_hash", ""),
        meta=dict(doc.get("meta", {})))


def save_report(report: MiraiReport, path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        path.write_text(json.dumps(to_document(report), indent=2, sort_keys=True,
                                   allow_nan=False) + "\n", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot write report to {path}: {exc}") from None
    return path


def load_report(path) -> MiraiReport:
    path = Path(path)
    if not path.exists():
        raise DataError(f"report not found: {path}")
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        raise DataError(f"report is not valid JSON: {path}") from None
    return from_document(doc)


def _mark(values, formatted):
    """Bold every value tied for best, underline those tied for second."""
    out = list(formatted)
    if not values:
        return out
    best = max(values)
    second = max((v for v in values if v != best), default=None)
    for i, v in enumerate(values):
        if v == best:
            out[i] = f"**{out[i]}**"
        elif second is not None and v == second:
            out[i] = f"_{out[i]}_"
    return out


def _cell(v: float) -> str:
    if v != 0.0 and abs(v) < 5e-4:
        return f"{v:.3e}"
    return f"{v:.4f}"


def render_table(report: MiraiReport) -> str:
    """Plain-text comparison table: dimensions as shaded header rows, metrics
    beneath them, lower-is-better rows asterisked, best bolded and runner-up
    underlined."""
    names = list(report.models)
    width = max([len(n) for n in names] + [10]) + 2
    label_w = 34

    def row(label, cells):
        return label.ljust(label_w) + "".join(c.rjust(width) for c in cells)

    lines = []
    lines.append(f"dataset: {report.dataset}    target: {report.target_model}")
    lines.append(row("model", names))
    lines.append("-" * (label_w + width * len(names)))
    mirai_vals = [report.models[n].mirai for n in names]
    lines.append(row("MIRAI", _mark(mirai_vals, [f"{v:.4f}" for v in mirai_vals])))
    lines.append(row("accuracy", [f"{report.models[n].accuracy:.4f}" for n in names]))
    lines.append(row("F1", [f"{report.models[n].f1:.4f}" for n in names]))
    for dim in DIMENSIONS:
        lines.append("=" * (label_w + width * len(names)))
        scores = [report.models[n].dimensions[dim].score for n in names]
        lines.append(row(DIMENSION_TITLES[dim].upper(),
                         _mark(scores, [f"{v:.4f}" for v in scores])))
        metric_names = [r.name for r in report.models[names[0]].dimensions[dim].metrics]
        for metric in metric_names:
            recs = [next(r for r in report.models[n].dimensions[dim].metrics
                         if r.name == metric) for n in names]
            display = [r.raw if r.direction != "higher_better" else r.aligned
                       for r in recs]
            aligned = [r.aligned for r in recs]
            star = "*" if recs[0].direction != "higher_better" else ""
            formatted = _mark(aligned, [_cell(v) for v in display])
            flagged = ["" if not r.flags else " !" for r in recs]
            cells = [f + g for f, g in zip(formatted, flagged)]
            lines.append(row(f"  {metric}{star}", cells))
    lines.append("-" * (label_w + width * len(names)))
    lines.append("ranking: " + " > ".join(report.ranking))
    lines.append("(*) lower raw value is better; shown raw. ! carries flags.")
    if report.warnings:
        lines.append("warnings: " + "; ".join(report.warnings))
    return "\n".join(lines) + "\n"


def write_csv(report: MiraiReport, path) -> Path:
    """Flat delimited dump: one row per metric, plus dimension and index rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "dimension", "subcategory", "metric", "raw",
                         "aligned", "direction", "flags"])
        for mid, rep in report.models.items():
            for dim in DIMENSIONS:
                ds = rep.dimensions[dim]
                for rec in ds.metrics:
                    writer.writerow([mid, dim, rec.subcategory or "", rec.name,
                                     repr(rec.raw), repr(rec.aligned),
                                     rec.direction, "|".join(rec.flags)])
                writer.writerow([mid, dim, "", "dimension_score", repr(ds.score),
                                 repr(ds.score), "higher_better", ""])
            writer.writerow([mid, "", "", "mirai", repr(rep.mirai),
                             repr(rep.mirai), "higher_better", ""])
    return path
