"""Command-line front end: validate, train, evaluate, compare, report."""

from __future__ import annotations

import argparse
import sys
import traceback
from pathlib import Path

import yaml

from .config import RunConfig, load_config
from .data import ingest_csv, split
from .errors import (AdapterError, ConfigError, DataError, MetricError,
                     SchemaError)
from .models import accuracy_f1, build_model
from .pipeline import check_evaluable, evaluate_run, has_warning_conditions
from .report import (load_report, render_table, save_report, write_csv)
from .seeding import derive_seed

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_METRIC = 4
EXIT_WARNINGS = 5

_OVERRIDE_SECTIONS = ("explain", "attack", "drift", "emissions", "privacy")


def _apply_overrides(cfg: RunConfig, assignments) -> None:
    """Apply ``section.key=value`` overrides in place; values parse as YAML."""
    for item in assignments or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not of the form section.key=value")
        target, text = item.split("=", 1)
        parts = target.split(".")
        if len(parts) != 2 or parts[0] not in _OVERRIDE_SECTIONS:
            raise ConfigError(
                f"override target {target!r} must be one of "
                f"{', '.join(_OVERRIDE_SECTIONS)} dotted with a key")
        section, key = parts
        options = getattr(cfg, section)
        if key not in options:
            raise ConfigError(f"unknown {section} key {key!r}")
        try:
            value = yaml.safe_load(text)
        except yaml.YAMLError:
            raise ConfigError(f"cannot parse override value {text!r}") from None
        options[key] = value


def _load(args) -> RunConfig:
    cfg = load_config(args.config)
    if getattr(args, "seed", None) is not None:
        cfg.seed = int(args.seed)
    if getattr(args, "workers", None) is not None:
        cfg.workers = int(args.workers)
        if cfg.workers < 1:
            raise ConfigError("workers must be a positive integer")
    if getattr(args, "output_dir", None) is not None:
        cfg.output_dir = Path(args.output_dir)
    _apply_overrides(cfg, getattr(args, "set", None))
    return cfg


def _cmd_validate(args) -> int:
    cfg = _load(args)
    check_evaluable(cfg)
    ds = ingest_csv(cfg.dataset_path, cfg.schema, name=cfg.dataset_name)
    train_idx, test_idx = split(ds, cfg.split)
    print(f"dataset: {ds.name} ({ds.n_samples} rows x {ds.n_features} features)")
    if getattr(ds, "n_rejected_rows", 0):
        print(f"  rejected rows with missing values: {ds.n_rejected_rows}")
    print(f"split: {len(train_idx)} train / {len(test_idx)} test "
          f"(fraction {cfg.split.train_fraction}, seed {cfg.split.seed})")
    print(f"sensitive: {cfg.sensitive.column} "
          f"({cfg.sensitive.privileged_value} vs {cfg.sensitive.unprivileged_value})")
    print("models:")
    for m in cfg.models:
        marker = "  <- target" if m.name == cfg.target_model else ""
        print(f"  {m.name} ({m.kind}){marker}")
    print("weights: " + ", ".join(f"{d}={w:g}" for d, w in cfg.weights.weights.items()))
    print(f"seed: {cfg.seed}")
    print(f"output_dir: {cfg.output_dir}")
    for w in cfg.warnings:
        print(f"warning: {w}")
    return EXIT_WARNINGS if cfg.warnings else EXIT_OK


def _cmd_train(args) -> int:
    cfg = _load(args)
    from .pipeline import prepare_data
    data = prepare_data(cfg)
    print(f"{'model':<16}{'family':<24}{'accuracy':>10}{'f1':>10}{'seconds':>10}")
    for spec in cfg.models:
        handle = build_model(spec, seed=derive_seed(cfg.seed, "model", spec.name))
        from .models.external import PredictionFileModel
        if isinstance(handle, PredictionFileModel):
            handle.bind_split("train", data.X_train)
            handle.bind_split("test", data.X_test)
        handle.fit(data.X_train, data.y_train)
        acc, f1 = accuracy_f1(handle, data.X_test, data.y_test)
        print(f"{spec.name:<16}{handle.family:<24}{acc:>10.4f}{f1:>10.4f}"
              f"{handle.train_time_seconds:>10.3f}")
    for w in data.warnings:
        print(f"warning: {w}")
    return EXIT_WARNINGS if data.warnings else EXIT_OK


def _emit(cfg: RunConfig, report) -> Path:
    out_dir = Path(cfg.output_dir)
    path = save_report(report, out_dir / "report.json")
    return path


def _cmd_evaluate(args) -> int:
    cfg = _load(args)
    report = evaluate_run(cfg, workers=cfg.workers)
    path = _emit(cfg, report)
    print(f"evaluated {len(report.models)} models on {report.dataset} "
          f"(seed {report.seed})")
    for w in report.warnings:
        print(f"warning: {w}")
    print(path)
    return EXIT_WARNINGS if has_warning_conditions(report) else EXIT_OK


def _cmd_compare(args) -> int:
    cfg = _load(args)
    report = evaluate_run(cfg, workers=cfg.workers)
    path = _emit(cfg, report)
    print(render_table(report))
    print()
    print(f"deltas vs target ({report.target_model}):")
    dims = list(report.weights)
    header = "".join(f"{d[:12]:>14}" for d in dims + ["mirai"])
    print(f"{'model':<16}{header}")
    for mid in report.ranking:
        row = report.deltas[mid]
        cells = "".join(f"{row[d]:>+14.4f}" for d in dims + ["mirai"])
        print(f"{mid:<16}{cells}")
    for w in report.warnings:
        print(f"warning: {w}")
    print(path)
    return EXIT_WARNINGS if has_warning_conditions(report) else EXIT_OK


def _cmd_report(args) -> int:
    cfg = _load(args)
    report_path = Path(args.report_path) if args.report_path else (
        Path(cfg.output_dir) / "report.json")
    report = load_report(report_path)
    out_dir = Path(cfg.output_dir)
    csv_path = write_csv(report, out_dir / "report.csv")
    from .report.figures import render_figures
    figure_paths = render_figures(report, out_dir)
    print(render_table(report))
    print(f"csv: {csv_path}")
    for p in figure_paths:
        print(f"figure: {p}")
    print(report_path)
    return EXIT_WARNINGS if report.warnings else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mirai",
        description="Five-dimension trustworthiness scoring for binary classifiers")
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, fn in (("validate", _cmd_validate), ("train", _cmd_train),
                     ("evaluate", _cmd_evaluate), ("compare", _cmd_compare),
                     ("report", _cmd_report)):
        p = sub.add_parser(verb)
        p.add_argument("--config", required=True,
                       help="YAML run configuration (MIRAI_CONFIG_DIR is the "
                            "fallback directory for relative paths)")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--workers", type=int, default=None)
        p.add_argument("--output-dir", default=None)
        p.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE",
                       help="override one option, e.g. attack.query_budget=500")
        if verb == "report":
            p.add_argument("--report-path", default=None,
                           help="stored report to re-render "
                                "(default: <output_dir>/report.json)")
        p.set_defaults(fn=fn)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (SchemaError, DataError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (MetricError, AdapterError) as exc:
        print(f"metric error: {exc}", file=sys.stderr)
        return EXIT_METRIC
    except Exception:
        traceback.print_exc()
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
