"""Resource-cost metrics: parameters, MACs/FLOPs, and normalized carbon."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

COST_METRICS = ("parameter_count", "flops_per_sample", "macs_per_sample",
                "normalized_kgco2e")


@dataclass(frozen=True)
class PowerProfile:
    cpu_watts: float
    gpu_watts: float

    def __post_init__(self):
        if self.cpu_watts < 0 or self.gpu_watts < 0:
            raise ConfigError("power draws must be non-negative")

    @property
    def total_kw(self) -> float:
        return (self.cpu_watts + self.gpu_watts) / 1000.0


@dataclass(frozen=True)
class EmissionConstants:
    grid_intensity: float
    daily_per_capita: float

    def __post_init__(self):
        if self.grid_intensity <= 0 or self.daily_per_capita <= 0:
            raise ConfigError("emission constants must be positive")


@dataclass
class SustainabilityRecord:
    raw: dict[str, float]
    aligned: dict[str, float] = field(default_factory=dict)
    flags: list[str] = field(default_factory=list)


def carbon_estimate(profile: PowerProfile, runtime_hours: float,
                    constants: EmissionConstants) -> float:
    """Energy (kWh) times grid intensity, normalized by a daily per-capita
    emission reference; dimensionless person-day equivalents."""
    if runtime_hours < 0:
        raise ConfigError("runtime_hours must be non-negative")
    kgco2e = profile.total_kw * runtime_hours * constants.grid_intensity
    return kgco2e / constants.daily_per_capita


def cohort_align(raw_values) -> tuple[np.ndarray, list[str]]:
    """aligned = 1 - raw/max over the cohort; the costliest model scores 0.
    An all-zero cohort aligns to 1 everywhere, with a flag."""
    raw = np.asarray(raw_values, dtype=np.float64)
    if raw.ndim != 1 or raw.shape[0] < 2:
        raise ConfigError("cohort alignment needs at least two models")
    if np.any(raw < 0):
        raise ConfigError("cohort cost values must be non-negative")
    top = raw.max()
    if top == 0.0:
        return np.ones_like(raw), ["all_zero_cohort"]
    return 1.0 - raw / top, []


def sustainability_dimension(record: SustainabilityRecord) -> float:
    """Mean of the four cohort-aligned cost metrics."""
    return float(np.mean([record.aligned[k] for k in COST_METRICS]))


def counted_runtime_hours(train_flops: float, query_flops: float,
                          throughput_flops: float) -> float:
    """Deterministic stand-in for wall-clock runtime: total counted work
    divided by a declared throughput. Keeps reports byte-identical across
    machines while preserving the training-plus-evaluation semantics."""
    if throughput_flops <= 0:
        raise ConfigError("throughput_flops must be positive")
    return (float(train_flops) + float(query_flops)) / throughput_flops / 3600.0


def raw_costs(handle, emissions: dict) -> tuple[dict[str, float], list[str]]:
    """The four raw cost metrics for one trained handle."""
    info = handle.resource_info()
    if info is None:
        raise ConfigError(
            f"model {handle.model_id!r} declares no resources; external models "
            "need parameter_count and macs_per_sample in the config")
    profile = PowerProfile(emissions["cpu_watts"], emissions["gpu_watts"])
    constants = EmissionConstants(emissions["grid_intensity"],
                                  emissions["daily_per_capita"])
    flags = []
    if emissions["runtime_mode"] == "wall":
        hours = handle.train_time_seconds / 3600.0
        flags.append("wall_clock_runtime")
    else:
        query_flops = float(handle.n_predict_rows) * info.flops_per_sample
        hours = counted_runtime_hours(handle.train_flops, query_flops,
                                      emissions["throughput_flops"])
    raw = {
        "parameter_count": float(info.parameter_count),
        "flops_per_sample": float(info.flops_per_sample),
        "macs_per_sample": float(info.macs_per_sample),
        "normalized_kgco2e": carbon_estimate(profile, hours, constants),
    }
    return raw, flags


def align_cohort(records: dict[str, SustainabilityRecord]) -> None:
    """Fill aligned values across a completed cohort, in place."""
    names = list(records)
    for metric in COST_METRICS:
        aligned, flags = cohort_align([records[m].raw[metric] for m in names])
        for i, name in enumerate(names):
            records[name].aligned[metric] = float(aligned[i])
            for fl in flags:
                label = f"{fl}_{metric}"
                if label not in records[name].flags:
                    records[name].flags.append(label)
