"""Linear max-margin classifier: hinge subgradient descent plus logistic calibration."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigError
from ..seeding import derive_rng
from .base import ClassifierHandle, ResourceInfo, sigmoid


def _fit_platt(z, y):
    """Newton fit of p = sigmoid(-(A z + B)) with smoothed targets."""
    n_pos = int(np.sum(y == 1))
    n_neg = len(y) - n_pos
    t = np.where(y == 1, (n_pos + 1.0) / (n_pos + 2.0), 1.0 / (n_neg + 2.0))
    A = 0.0
    B = math.log((n_neg + 1.0) / (n_pos + 1.0))

    def nll(a, b):
        u = a * z + b
        # -sum t log p + (1-t) log(1-p) with p = sigmoid(-u), stable form
        return float(np.sum(np.where(u >= 0, t * u + np.log1p(np.exp(-u)),
                                     (t - 1.0) * u + np.log1p(np.exp(u)))))

    prev = nll(A, B)
    for _ in range(100):
        p = sigmoid(-(A * z + B))
        d = t - p
        g = np.array([np.dot(d, z), d.sum()])
        if np.max(np.abs(g)) < 1e-10:
            break
        w = p * (1.0 - p)
        h = np.array([[np.dot(w, z * z) + 1e-12, np.dot(w, z)],
                      [np.dot(w, z), w.sum() + 1e-12]])
        step = np.linalg.solve(h, g)
        scale = 1.0
        for _ in range(30):
            cand = nll(A - scale * step[0], B - scale * step[1])
            if cand <= prev + 1e-12:
                break
            scale *= 0.5
        A -= scale * step[0]
        B -= scale * step[1]
        if abs(prev - cand) < 1e-12:
            prev = cand
            break
        prev = cand
    return float(A), float(B)


class LinearMaxMargin(ClassifierHandle):
    """L2-regularized hinge loss, full-batch subgradient descent.

    The weight vector is fit on an inner 80% fold; the held-out 20% supplies
    margins for the logistic calibration that turns margins into
    probabilities. Updates are linear combinations of training rows, so the
    weight never leaves the span of the data.
    """

    family = "linear_max_margin"

    def __init__(self, model_id: str, C: float = 1.0, epochs: int = 300, seed: int = 0):
        super().__init__(model_id, seed)
        if C <= 0:
            raise ConfigError("C must be positive")
        if epochs < 1:
            raise ConfigError("epochs must be at least 1")
        self.C = float(C)
        self.epochs = int(epochs)

    def _fit(self, X, y):
        n = X.shape[0]
        rng = derive_rng(self.seed, "platt-fold")
        perm = rng.permutation(n)
        n_cal = max(2, int(np.floor(0.2 * n + 0.5)))
        if n - n_cal < 2:
            n_cal = max(0, n - 2)
        cal_idx = perm[:n_cal]
        fit_idx = perm[n_cal:]
        # keep the fold usable: calibration needs both classes, else fall back
        if n_cal < 2 or len(np.unique(y[cal_idx])) < 2 or len(np.unique(y[fit_idx])) < 2:
            fit_idx = np.arange(n)
            cal_idx = np.arange(n)
        self._train_margin(X[fit_idx], y[fit_idx])
        z = X[cal_idx] @ self._w + self._b
        self._A, self._B = _fit_platt(z, y[cal_idx])

    def _train_margin(self, X, y):
        n, d = X.shape
        ypm = 2.0 * y - 1.0
        lam = 1.0 / (self.C * n)
        w = np.zeros(d)
        b = 0.0
        for t in range(1, self.epochs + 1):
            margins = ypm * (X @ w + b)
            viol = margins < 1.0
            eta = 1.0 / (lam * (t + 1))
            grad_w = lam * w - (X[viol] * ypm[viol, None]).sum(axis=0) / n
            grad_b = -ypm[viol].sum() / n
            w = w - eta * grad_w
            b = b - eta * grad_b
        self._w = w
        self._b = b
        self.train_flops += 4.0 * self.epochs * n * d

    def decision_function(self, X):
        X = np.asarray(X, dtype=np.float64)
        return X @ self._w + self._b

    def _proba(self, X):
        return sigmoid(-(self._A * (X @ self._w + self._b) + self._B))

    def resource_info(self) -> ResourceInfo:
        d = len(self._w)
        return ResourceInfo.from_macs(d + 3, d + 2)
