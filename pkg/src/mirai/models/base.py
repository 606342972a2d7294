"""Classifier handle protocol and resource accounting shared by all models."""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ..errors import AdapterError, DataError


@dataclass(frozen=True)
class ResourceInfo:
    """Inference-cost summary under the FLOPs = 2 x MACs convention."""

    parameter_count: int
    macs_per_sample: int
    flops_per_sample: int

    def __post_init__(self):
        if self.parameter_count < 0 or self.macs_per_sample < 0:
            raise DataError("resource counts must be non-negative")
        if self.flops_per_sample != 2 * self.macs_per_sample:
            raise DataError("flops_per_sample must equal 2 * macs_per_sample")

    @classmethod
    def from_macs(cls, parameter_count: int, macs_per_sample: int) -> "ResourceInfo":
        return cls(int(parameter_count), int(macs_per_sample), 2 * int(macs_per_sample))


class ClassifierHandle:
    """Black-box binary classifier: a probability function plus introspection.

    Subclasses implement ``_fit`` and ``_proba``. ``predict_proba`` validates
    inputs and outputs and counts scored rows, so sustainability accounting
    sees every query any metric makes. Handles are immutable after ``fit``
    and safe for concurrent prediction.
    """

    family = "external"
    randomizable = False

    def __init__(self, model_id: str, seed: int = 0):
        self.model_id = model_id
        self.seed = int(seed)
        self.train_time_seconds = 0.0
        self.train_flops = 0.0
        self.n_predict_rows = 0
        self._fitted = False

    def fit(self, X, y) -> "ClassifierHandle":
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.int64)
        if X.ndim != 2 or y.shape != (X.shape[0],):
            raise DataError("fit expects a 2-D matrix and matching label vector")
        start = time.perf_counter()
        self._fit(X, y)
        self.train_time_seconds = time.perf_counter() - start
        self._fitted = True
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
        if not self._fitted:
            raise AdapterError(f"model {self.model_id!r} used before fit")
        p = np.asarray(self._proba(X), dtype=np.float64).reshape(-1)
        if p.shape[0] != X.shape[0]:
            raise AdapterError(
                f"model {self.model_id!r} returned {p.shape[0]} probabilities "
                f"for {X.shape[0]} rows")
        if not np.all(np.isfinite(p)):
            raise AdapterError(f"model {self.model_id!r} produced non-finite probabilities")
        if p.min() < -1e-9 or p.max() > 1 + 1e-9:
            raise AdapterError(f"model {self.model_id!r} produced probabilities outside [0,1]")
        self.n_predict_rows += X.shape[0]
        return np.clip(p, 0.0, 1.0)

    def predict(self, X) -> np.ndarray:
        return (self.predict_proba(X) >= 0.5).astype(np.int64)

    def resource_info(self) -> ResourceInfo | None:
        return None

    def _fit(self, X, y):
        raise NotImplementedError

    def _proba(self, X):
        raise NotImplementedError


def accuracy_f1(handle: ClassifierHandle, X, y) -> tuple[float, float]:
    """Accuracy and F1 at threshold 0.5; F1 is 0 when precision+recall is 0."""
    y = np.asarray(y, dtype=np.int64)
    pred = handle.predict(X)
    acc = float(np.mean(pred == y))
    tp = int(np.sum((pred == 1) & (y == 1)))
    fp = int(np.sum((pred == 1) & (y == 0)))
    fn = int(np.sum((pred == 0) & (y == 1)))
    denom = 2 * tp + fp + fn
    f1 = 2.0 * tp / denom if denom > 0 else 0.0
    return acc, f1


def sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out
