"""Adversarial and distributional robustness metrics."""

from .drift import DriftLadder, DriftOutcome, drift_robustness, robustness_dimension
from .hsja import AttackBudget, AttackResult, hsja_attack, hsja_robustness_score
from .mmd import (median_bandwidth, mmd2_biased, mmd2_unbiased,
                  mmd_permutation_test, rbf_kernel)

__all__ = [
    "AttackBudget", "AttackResult", "hsja_attack", "hsja_robustness_score",
    "DriftLadder", "DriftOutcome", "drift_robustness", "robustness_dimension",
    "rbf_kernel", "median_bandwidth", "mmd2_unbiased", "mmd2_biased",
    "mmd_permutation_test",
]
