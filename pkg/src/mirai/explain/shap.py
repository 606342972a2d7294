"""Kernel SHAP attributions by Shapley-kernel weighted least squares."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from ..seeding import derive_rng


@dataclass
class AttributionMatrix:
    """Per-row feature attributions for a set of explained samples."""

    values: np.ndarray
    base_value: float
    background: np.ndarray
    n_coalitions: int
    flags: list[str] = field(default_factory=list)


def _kernel_weight(d, s):
    return (d - 1) / (math.comb(d, s) * s * (d - s))


def _size_masses(d):
    sizes = np.arange(1, d)
    mass = (d - 1) / (sizes * (d - sizes))
    return sizes, mass / mass.sum()


class ShapExplainer:
    """Coalition sample drawn once, reused for every explained row.

    Freezing the coalition set makes explanation a pure function of the
    input row, which the stability metrics (perturb-and-compare) need, and
    lets the weighted least squares be prefactored into a single projection
    matrix. The full and empty coalitions are handled as hard constraints:
    the last feature's attribution is substituted out, so per-row local
    accuracy holds by construction.
    """

    def __init__(self, n_features: int, background, budget: int, rng=None):
        d = int(n_features)
        background = np.asarray(background, dtype=np.float64)
        if background.ndim != 2 or background.shape[0] == 0:
            raise ConfigError("background must be a non-empty matrix")
        if background.shape[1] != d:
            raise ConfigError("background width disagrees with feature count")
        if d < 1:
            raise ConfigError("need at least one feature")
        self.d = d
        self.background = background
        self.flags: list[str] = []
        if d == 1:
            self.masks = np.zeros((0, 1), dtype=bool)
            self.n_coalitions = 2
            return
        if 2 ** d <= budget:
            codes = np.arange(1, 2 ** d - 1, dtype=np.int64)
            self.masks = (codes[:, None] >> np.arange(d)) & 1
            self.masks = self.masks.astype(bool)
            self._weights = np.array([_kernel_weight(d, int(s))
                                      for s in self.masks.sum(axis=1)])
            self._enumerated = True
        else:
            if budget < 2 * d + 2:
                raise ConfigError(f"coalition budget {budget} below minimum {2 * d + 2}")
            rng = derive_rng(0, "shap") if rng is None else rng
            n_draw = budget - 2
            sizes, probs = _size_masses(d)
            drawn = rng.choice(sizes, size=n_draw, p=probs)
            masks = np.zeros((n_draw, d), dtype=bool)
            for i, s in enumerate(drawn):
                masks[i, rng.choice(d, size=int(s), replace=False)] = True
            self.masks = masks
            # kernel mass is carried by the sampling frequency; unit weights
            self._weights = np.ones(n_draw)
            self._enumerated = False
        self.n_coalitions = self.masks.shape[0] + 2
        self._prefactor()

    def _prefactor(self):
        d = self.d
        A = self.masks[:, :d - 1].astype(np.float64) - self.masks[:, d - 1:d]
        sw = np.sqrt(self._weights)
        Aw = A * sw[:, None]
        _, singulars, _ = np.linalg.svd(Aw, full_matrices=False)
        rank = int(np.sum(singulars > singulars[0] * 1e-12)) if len(singulars) else 0
        if rank < d - 1:
            # singular system: ridge-regularized normal equations
            gram = Aw.T @ Aw + 1e-9 * np.eye(d - 1)
            self._proj = np.linalg.solve(gram, Aw.T)
            self.flags.append("shap_ridge_fallback")
        else:
            self._proj = np.linalg.pinv(Aw)
        self._sw = sw

    def base_value(self, predict_fn) -> float:
        return float(np.mean(predict_fn(self.background)))

    def _coalition_values(self, predict_fn, x):
        m = self.masks.shape[0]
        k = self.background.shape[0]
        mixed = np.where(self.masks[:, None, :], x[None, None, :],
                         self.background[None, :, :])
        batch = np.concatenate([mixed.reshape(m * k, self.d), x[None, :],
                                self.background])
        out = predict_fn(batch)
        v = out[:m * k].reshape(m, k).mean(axis=1)
        v_full = float(out[m * k])
        v_empty = float(np.mean(out[m * k + 1:]))
        return v, v_full, v_empty

    def explain(self, predict_fn, x):
        x = np.asarray(x, dtype=np.float64).reshape(-1)
        if x.shape[0] != self.d:
            raise ConfigError("row width disagrees with feature count")
        v, v_full, v_empty = self._coalition_values(predict_fn, x)
        total = v_full - v_empty
        phi = np.empty(self.d)
        if self.d == 1:
            phi[0] = total
            return phi, v_empty
        y = (v - v_empty - self.masks[:, self.d - 1] * total) * self._sw
        head = self._proj @ y
        phi[:self.d - 1] = head
        phi[self.d - 1] = total - head.sum()
        return phi, v_empty

    def explain_batch(self, predict_fn, X) -> AttributionMatrix:
        X = np.asarray(X, dtype=np.float64)
        values = np.empty((X.shape[0], self.d))
        base = 0.0
        for i in range(X.shape[0]):
            values[i], base = self.explain(predict_fn, X[i])
        return AttributionMatrix(values, base, self.background,
                                 self.n_coalitions, list(self.flags))


def kernel_shap(predict_fn, x, background, budget: int, rng=None):
    """One-row attribution: (phi, base_value). Enumerates all coalitions
    when 2^d fits the budget, otherwise samples them kernel-proportionally."""
    background = np.asarray(background, dtype=np.float64)
    explainer = ShapExplainer(background.shape[1], background, budget, rng)
    phi, base = explainer.explain(predict_fn, x)
    return phi, base


def brute_force_shapley(predict_fn, x, background):
    """Permutation-enumeration Shapley oracle; exponential, tests only."""
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    background = np.asarray(background, dtype=np.float64)
    d = x.shape[0]

    cache: dict[frozenset, float] = {}

    def value(members: frozenset) -> float:
        if members not in cache:
            mask = np.zeros(d, dtype=bool)
            mask[list(members)] = True
            rows = np.where(mask[None, :], x[None, :], background)
            cache[members] = float(np.mean(predict_fn(rows)))
        return cache[members]

    import itertools

    phi = np.zeros(d)
    perms = list(itertools.permutations(range(d)))
    for perm in perms:
        seen: set[int] = set()
        prev = value(frozenset())
        for j in perm:
            seen.add(j)
            cur = value(frozenset(seen))
            phi[j] += cur - prev
            prev = cur
    return phi / len(perms), value(frozenset())
