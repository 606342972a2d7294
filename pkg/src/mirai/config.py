"""Run configuration: YAML loading, validation, and canonical hashing."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .data import ColumnSchema, SensitiveSpec, SplitSpec
from .errors import ConfigError

DIMENSIONS = ("explainability", "fairness", "sustainability", "robustness", "privacy")

DEFAULT_WEIGHTS = {d: 0.2 for d in DIMENSIONS}


@dataclass
class WeightVector:
    """Dimension weights for the composite index.

    Weights must be non-negative and are renormalized to sum to one when
    they do not already; ``renormalized`` records that this happened so the
    report can carry a warning.
    """

    weights: dict[str, float]
    renormalized: bool = False

    @classmethod
    def from_mapping(cls, mapping) -> "WeightVector":
        if mapping is None:
            return cls(dict(DEFAULT_WEIGHTS))
        unknown = set(mapping) - set(DIMENSIONS)
        if unknown:
            raise ConfigError(f"unknown weight dimensions: {sorted(unknown)}")
        w = {d: float(mapping.get(d, 0.0)) for d in DIMENSIONS}
        if any(v < 0 for v in w.values()):
            raise ConfigError("weights must be non-negative")
        total = sum(w.values())
        if total <= 0:
            raise ConfigError("weights must not all be zero")
        renorm = abs(total - 1.0) > 1e-9
        if renorm:
            w = {d: v / total for d, v in w.items()}
        return cls(w, renorm)


@dataclass
class ModelSpec:
    name: str
    kind: str
    params: dict = field(default_factory=dict)
    resources: dict | None = None


@dataclass
class RunConfig:
    dataset_path: Path
    schema: ColumnSchema
    sensitive: SensitiveSpec
    models: list[ModelSpec]
    target_model: str
    split: SplitSpec = field(default_factory=SplitSpec)
    weights: WeightVector = field(default_factory=lambda: WeightVector(dict(DEFAULT_WEIGHTS)))
    seed: int = 0
    dataset_name: str = "dataset"
    output_dir: Path = Path("mirai_out")
    explain: dict = field(default_factory=dict)
    attack: dict = field(default_factory=dict)
    drift: dict = field(default_factory=dict)
    emissions: dict = field(default_factory=dict)
    privacy: dict = field(default_factory=dict)
    workers: int = 1
    warnings: list[str] = field(default_factory=list)

    def model_named(self, name: str) -> ModelSpec:
        for m in self.models:
            if m.name == name:
                return m
        raise ConfigError(f"no model named {name!r}")


_EXPLAIN_DEFAULTS = {
    "n_explain": 100,
    "n_background": 32,
    "n_coalitions": 256,
    "lipschitz_neighbours": 8,
    "lipschitz_radius": 0.1,
    "faithfulness_subsets": 32,
    "faithfulness_size": 3,
}

_ATTACK_DEFAULTS = {
    "n_points": 50,
    "query_budget": 2000,
    "epsilon": 2.0,
    "init_trials": 40,
    "boundary_tol": 1e-3,
    "grad_samples": 24,
    "iterations": 12,
}

_DRIFT_DEFAULTS = {
    "noise_levels": [0.05, 0.1, 0.2, 0.5],
    "n_permutations": 199,
    "max_points": 200,
}

_EMISSIONS_DEFAULTS = {
    "cpu_watts": 65.0,
    "gpu_watts": 0.0,
    "grid_intensity": 0.11,
    "daily_per_capita": 49.0,
    "throughput_flops": 1e9,
    "runtime_mode": "counted",
}

_PRIVACY_DEFAULTS = {
    "knn_k": 5,
    "max_shadow_points": 500,
    "max_valuation_points": 200,
}


def _merged(defaults, given, label):
    if given is None:
        return dict(defaults)
    if not isinstance(given, dict):
        raise ConfigError(f"{label} section must be a mapping")
    unknown = set(given) - set(defaults)
    if unknown:
        raise ConfigError(f"unknown {label} keys: {sorted(unknown)}")
    out = dict(defaults)
    out.update(given)
    return out


def load_config(path) -> RunConfig:
    """Parse and validate a YAML run configuration.

    Relative paths inside the file resolve against the file's directory.
    The MIRAI_CONFIG_DIR environment variable, when set, is the fallback
    directory for a relative config path itself.
    """
    path = Path(path)
    if not path.exists() and not path.is_absolute():
        env_dir = os.environ.get("MIRAI_CONFIG_DIR")
        if env_dir and (Path(env_dir) / path).exists():
            path = Path(env_dir) / path
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"invalid YAML in {path}: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")

    base = path.parent

    def _resolve(p):
        p = Path(p)
        return p if p.is_absolute() else (base / p)

    for key in ("dataset", "models", "target_model", "sensitive"):
        if key not in raw:
            raise ConfigError(f"missing required config key {key!r}")

    ds_sec = raw["dataset"]
    if not isinstance(ds_sec, dict) or "path" not in ds_sec or "label" not in ds_sec:
        raise ConfigError("dataset section needs 'path' and 'label'")
    schema = ColumnSchema(
        label=str(ds_sec["label"]),
        sensitive=str(raw["sensitive"]["column"]),
        categorical=[str(c) for c in ds_sec.get("categorical", [])],
        drop=[str(c) for c in ds_sec.get("drop", [])],
    )

    sens_sec = raw["sensitive"]
    for key in ("column", "privileged", "unprivileged"):
        if key not in sens_sec:
            raise ConfigError(f"sensitive section needs {key!r}")
    sensitive = SensitiveSpec(
        column=str(sens_sec["column"]),
        privileged_value=str(sens_sec["privileged"]),
        unprivileged_value=str(sens_sec["unprivileged"]),
    )

    split_sec = raw.get("split", {}) or {}
    seed = int(raw.get("seed", 0))
    split_spec = SplitSpec(
        train_fraction=float(split_sec.get("train_fraction", 0.8)),
        seed=int(split_sec.get("seed", seed)),
        stratified=bool(split_sec.get("stratified", True)),
    )
    if not 0.0 < split_spec.train_fraction < 1.0:
        raise ConfigError("split.train_fraction must lie strictly between 0 and 1")

    models_sec = raw["models"]
    if not isinstance(models_sec, list) or not models_sec:
        raise ConfigError("models must be a non-empty list")
    models = []
    seen = set()
    for m in models_sec:
        if not isinstance(m, dict) or "name" not in m or "kind" not in m:
            raise ConfigError("each model needs 'name' and 'kind'")
        name = str(m["name"])
        if name in seen:
            raise ConfigError(f"duplicate model name {name!r}")
        seen.add(name)
        params = dict(m.get("params", {}) or {})
        resources = m.get("resources")
        if resources is not None:
            resources = dict(resources)
        models.append(ModelSpec(name=name, kind=str(m["kind"]),
                                params=params, resources=resources))

    target = str(raw["target_model"])
    if target not in seen:
        raise ConfigError(f"target_model {target!r} is not in the models list")

    warnings = []
    weights = WeightVector.from_mapping(raw.get("weights"))
    if weights.renormalized:
        warnings.append("weights did not sum to 1 and were renormalized")

    cfg = RunConfig(
        dataset_path=_resolve(ds_sec["path"]),
        schema=schema,
        sensitive=sensitive,
        models=models,
        target_model=target,
        split=split_spec,
        weights=weights,
        seed=seed,
        dataset_name=str(ds_sec.get("name", Path(str(ds_sec["path"])).stem)),
        output_dir=_resolve(raw.get("output_dir", "mirai_out")),
        explain=_merged(_EXPLAIN_DEFAULTS, raw.get("explain"), "explain"),
        attack=_merged(_ATTACK_DEFAULTS, raw.get("attack"), "attack"),
        drift=_merged(_DRIFT_DEFAULTS, raw.get("drift"), "drift"),
        emissions=_merged(_EMISSIONS_DEFAULTS, raw.get("emissions"), "emissions"),
        privacy=_merged(_PRIVACY_DEFAULTS, raw.get("privacy"), "privacy"),
        workers=int(raw.get("workers", 1)),
        warnings=warnings,
    )
    if cfg.workers < 1:
        raise ConfigError("workers must be a positive integer")
    if cfg.emissions["runtime_mode"] not in ("counted", "wall"):
        raise ConfigError("emissions.runtime_mode must be 'counted' or 'wall'")
    return cfg


def config_hash(cfg: RunConfig) -> str:
    """Stable digest of everything that affects scores (paths excluded)."""
    payload = {
        "dataset_name": cfg.dataset_name,
        "label": cfg.schema.label,
        "categorical": sorted(cfg.schema.categorical),
        "drop": sorted(cfg.schema.drop),
        "sensitive": [cfg.sensitive.column, cfg.sensitive.privileged_value,
                      cfg.sensitive.unprivileged_value],
        "models": [[m.name, m.kind, sorted(m.params.items()),
                    sorted(m.resources.items()) if m.resources else None]
                   for m in cfg.models],
        "target_model": cfg.target_model,
        "split": [cfg.split.train_fraction, cfg.split.seed, cfg.split.stratified],
        "weights": sorted(cfg.weights.weights.items()),
        "seed": cfg.seed,
        "explain": sorted(cfg.explain.items()),
        "attack": sorted(cfg.attack.items()),
        "drift": sorted((k, tuple(v) if isinstance(v, list) else v)
                        for k, v in cfg.drift.items()),
        "emissions": sorted(cfg.emissions.items()),
        "privacy": sorted(cfg.privacy.items()),
    }
    text = json.dumps(payload, sort_keys=True, default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]
