"""Decision-based boundary attack and the budgeted adversarial accuracy score."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..seeding import derive_rng


@dataclass(frozen=True)
class AttackBudget:
    max_queries: int = 2000
    epsilon: float = 2.0
    n_eval_points: int = 50
    seed: int = 0
    init_trials: int = 40
    boundary_tol: float = 1e-3
    grad_samples: int = 24
    iterations: int = 12

    def __post_init__(self):
        if self.max_queries <= 0:
            raise ConfigError("max_queries must be positive")
        if self.epsilon <= 0:
            raise ConfigError("epsilon must be positive")


@dataclass
class AttackResult:
    success: bool
    adversarial: np.ndarray | None
    perturbation_norm: float
    queries: int
    norm_trajectory: list[float] = field(default_factory=list)


class _QueryCounter:
    """Hard-label oracle with a shared query budget."""

    def __init__(self, handle, max_queries):
        self.handle = handle
        self.remaining = int(max_queries)
        self.used = 0

    def decide(self, Z) -> np.ndarray:
        Z = np.atleast_2d(np.asarray(Z, dtype=np.float64))
        n = Z.shape[0]
        if n > self.remaining:
            raise _BudgetExhausted
        self.remaining -= n
        self.used += n
        return (self.handle.predict_proba(Z) >= 0.5).astype(np.int64)


class _BudgetExhausted(Exception):
    pass


def _binary_search(oracle, x, x_adv, orig_label, tol):
    """Shrink the segment [clean, adversarial] until its length is below tol;
    returns the adversarial-side endpoint."""
    lo = x
    hi = x_adv
    while np.linalg.norm(hi - lo) > tol:
        mid = (lo + hi) / 2.0
        if oracle.decide(mid)[0] != orig_label:
            hi = mid
        else:
            lo = mid
    return hi


def hsja_attack(handle, x, budget: AttackBudget, rng=None) -> AttackResult:
    """Minimal-L2 label flip for one row using hard-label queries only.

    Stages: expanding Gaussian search for any misclassified point, binary
    search onto the decision boundary, then refinement rounds that estimate
    the boundary normal from label flips of Gaussian probes (with baseline
    correction), jump geometrically along it, and re-project. The best
    perturbation seen is tracked, so the reported norm never increases
    between rounds. Runs out of queries gracefully: whatever has been found
    is returned.
    """
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    d = x.shape[0]
    rng = derive_rng(budget.seed, "hsja") if rng is None else rng
    oracle = _QueryCounter(handle, budget.max_queries)
    trajectory: list[float] = []

    def result(best):
        if best is None:
            return AttackResult(False, None, np.inf, oracle.used, trajectory)
        return AttackResult(True, best, float(np.linalg.norm(best - x)),
                            oracle.used, trajectory)

    best = None
    try:
        orig_label = int(oracle.decide(x)[0])

        x_adv = None
        scale = 0.5
        for _ in range(budget.init_trials):
            chunk = min(8, oracle.remaining)
            if chunk == 0:
                break
            cand = x[None, :] + scale * rng.normal(size=(chunk, d))
            labels = oracle.decide(cand)
            hits = np.flatnonzero(labels != orig_label)
            if hits.size:
                x_adv = cand[hits[0]]
                break
            scale = min(scale * 1.5, 1e3)
        if x_adv is None:
            return result(None)
        best = x_adv.copy()

        x_b = _binary_search(oracle, x, x_adv, orig_label, budget.boundary_tol)
        if np.linalg.norm(x_b - x) < np.linalg.norm(best - x):
            best = x_b.copy()
        trajectory.append(float(np.linalg.norm(best - x)))

        for t in range(1, budget.iterations + 1):
            dist = np.linalg.norm(x_b - x)
            if dist == 0.0:
                break
            delta = max(dist / d, 1e-8)
            n_probe = min(int(budget.grad_samples * np.sqrt(t)), oracle.remaining - 2)
            if n_probe < 2:
                break
            u = rng.normal(size=(n_probe, d))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            flips = (oracle.decide(x_b[None, :] + delta * u) != orig_label)
            phi = 2.0 * flips.astype(np.float64) - 1.0
            v = ((phi - phi.mean())[:, None] * u).sum(axis=0)
            norm_v = np.linalg.norm(v)
            if norm_v == 0.0:
                v = rng.normal(size=d)
                norm_v = np.linalg.norm(v)
            v /= norm_v

            xi = dist / np.sqrt(t)
            stepped = None
            for _ in range(12):
                cand = x_b + xi * v
                if oracle.decide(cand)[0] != orig_label:
                    stepped = cand
                    break
                xi /= 2.0
            if stepped is None:
                trajectory.append(float(np.linalg.norm(best - x)))
                continue
            x_b = _binary_search(oracle, x, stepped, orig_label, budget.boundary_tol)
            if np.linalg.norm(x_b - x) < np.linalg.norm(best - x):
                best = x_b.copy()
            trajectory.append(float(np.linalg.norm(best - x)))
    except _BudgetExhausted:
        pass
    return result(best)


def hsja_robustness_score(handle, X, y, budget: AttackBudget, seed: int = 0):
    """Share of attacked rows that stay safe: the attack fails outright or
    only succeeds beyond the epsilon budget. Evaluated on a seeded sample of
    correctly classified rows."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.int64)
    pred = handle.predict(X)
    correct = np.flatnonzero(pred == y)
    flags: list[str] = []
    if correct.size == 0:
        return 1.0, [], ["no_correct_predictions"]
    picker = derive_rng(seed, "hsja-points")
    chosen = correct[picker.permutation(correct.size)[:budget.n_eval_points]]
    chosen = np.sort(chosen)
    details = []
    safe = 0
    for row in chosen:
        rng = derive_rng(seed, "hsja-row", str(int(row)))
        res = hsja_attack(handle, X[row], budget, rng)
        robust = (not res.success) or (res.perturbation_norm > budget.epsilon)
        safe += int(robust)
        details.append({
            "row": int(row),
            "success": bool(res.success),
            "queries": int(res.queries),
            "perturbation_norm": (float(res.perturbation_norm)
                                  if np.isfinite(res.perturbation_norm) else None),
        })
    return safe / len(chosen), details, flags
