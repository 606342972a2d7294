"""Prediction-space drift scoring over a ladder of Gaussian perturbations."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..seeding import derive_rng
from .mmd import mmd_permutation_test


@dataclass(frozen=True)
class DriftLadder:
    noise_levels: tuple[float, ...] = (0.05, 0.1, 0.2, 0.5)
    n_permutations: int = 199
    max_points: int = 200

    def __post_init__(self):
        levels = tuple(float(s) for s in self.noise_levels if float(s) > 0.0)
        object.__setattr__(self, "noise_levels", levels)
        if not levels:
            raise ConfigError("drift ladder needs at least one positive noise level")
        if self.n_permutations < 100:
            raise ConfigError("drift test needs at least 100 permutations")
        if self.max_points < 4:
            raise ConfigError("drift batch must hold at least 4 points")


@dataclass
class DriftOutcome:
    score: float
    level_pvalues: list[float]
    flags: list[str] = field(default_factory=list)


def drift_robustness(handle, X, ladder: DriftLadder, seed: int = 0) -> DriftOutcome:
    """Mean permutation p-value between clean and noise-perturbed prediction
    distributions across the ladder. High p-values mean the test cannot tell
    the two apart, so 1 is the drift-robust end."""
    X = np.asarray(X, dtype=np.float64)
    picker = derive_rng(seed, "drift-batch")
    take = min(ladder.max_points, X.shape[0])
    batch = X[np.sort(picker.permutation(X.shape[0])[:take])]
    p_clean = handle.predict_proba(batch).reshape(-1, 1)

    pvals = []
    flags: list[str] = []
    for k, sigma in enumerate(ladder.noise_levels):
        noise = derive_rng(seed, "drift-noise", str(k)).normal(size=batch.shape)
        p_pert = handle.predict_proba(batch + sigma * noise).reshape(-1, 1)
        perm_rng = derive_rng(seed, "drift-perm", str(k))
        p_value, _, level_flags = mmd_permutation_test(
            p_clean, p_pert, ladder.n_permutations, perm_rng)
        pvals.append(float(p_value))
        for fl in level_flags:
            label = f"{fl}_sigma_{sigma:g}"
            if label not in flags:
                flags.append(label)
    return DriftOutcome(float(np.mean(pvals)), pvals, flags)


def robustness_dimension(hsja_score: float, drift_score: float) -> float:
    return float((hsja_score + drift_score) / 2.0)
