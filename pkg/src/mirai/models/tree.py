"""CART decision tree with Gini splits and array-based vectorized inference."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigError
from .base import ClassifierHandle, ResourceInfo


def _gini_pair(pos, size):
    p = pos / size
    return 2.0 * p * (1.0 - p)


class DecisionTree(ClassifierHandle):
    """Greedy binary CART classifier.

    Splits minimize weighted Gini impurity; a zero-gain split is still taken
    on an impure node so parity-style targets remain learnable within the
    depth budget. Ties go to the lowest feature index, then the lowest
    threshold. Leaves store the class-1 frequency of their training rows.
    """

    family = "decision_tree"

    def __init__(self, model_id: str, max_depth: int = 6, min_leaf: int = 5, seed: int = 0):
        super().__init__(model_id, seed)
        if max_depth < 1:
            raise ConfigError("max_depth must be at least 1")
        if min_leaf < 1:
            raise ConfigError("min_leaf must be at least 1")
        self.max_depth = int(max_depth)
        self.min_leaf = int(min_leaf)

    def _fit(self, X, y):
        self._feature: list[int] = []
        self._threshold: list[float] = []
        self._left: list[int] = []
        self._right: list[int] = []
        self._value: list[float] = []
        self._n_train = X.shape[0]
        self._weighted_depth = 0.0
        self._build(X, y, np.arange(X.shape[0]), 0)
        self._feature = np.asarray(self._feature, dtype=np.int64)
        self._threshold = np.asarray(self._threshold, dtype=np.float64)
        self._left = np.asarray(self._left, dtype=np.int64)
        self._right = np.asarray(self._right, dtype=np.int64)
        self._value = np.asarray(self._value, dtype=np.float64)

    def _new_node(self):
        self._feature.append(-1)
        self._threshold.append(0.0)
        self._left.append(-1)
        self._right.append(-1)
        self._value.append(0.0)
        return len(self._feature) - 1

    def _build(self, X, y, idx, depth):
        node = self._new_node()
        y_node = y[idx]
        self._value[node] = float(y_node.mean())
        pure = y_node.min() == y_node.max()
        if depth >= self.max_depth or pure or len(idx) < 2 * self.min_leaf:
            self._weighted_depth += len(idx) * depth
            return node
        found = self._best_split(X, y, idx)
        if found is None:
            self._weighted_depth += len(idx) * depth
            return node
        _, j, thr = found
        self._feature[node] = j
        self._threshold[node] = thr
        go_left = X[idx, j] <= thr
        left = self._build(X, y, idx[go_left], depth + 1)
        right = self._build(X, y, idx[~go_left], depth + 1)
        self._left[node] = left
        self._right[node] = right
        return node

    def _best_split(self, X, y, idx):
        n = len(idx)
        y_node = y[idx].astype(np.float64)
        total_pos = y_node.sum()
        best = None
        for j in range(X.shape[1]):
            xs = X[idx, j]
            order = np.argsort(xs, kind="stable")
            xv = xs[order]
            if xv[0] == xv[-1]:
                continue
            pos = np.cumsum(y_node[order])[:-1]
            k = np.arange(1, n, dtype=np.float64)
            valid = xv[1:] > xv[:-1]
            valid &= (k >= self.min_leaf) & (n - k >= self.min_leaf)
            if not valid.any():
                continue
            score = (k * _gini_pair(pos, k) + (n - k) * _gini_pair(total_pos - pos, n - k)) / n
            score[~valid] = np.inf
            kk = int(np.argmin(score))
            self.train_flops += n * (math.ceil(math.log2(max(n, 2))) + 8)
            if best is None or score[kk] < best[0] - 1e-12:
                best = (float(score[kk]), j, float((xv[kk] + xv[kk + 1]) / 2.0))
        return best

    def _proba(self, X):
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        while True:
            feat = self._feature[node]
            active = feat >= 0
            if not active.any():
                break
            r = rows[active]
            f = feat[active]
            left = X[r, f] <= self._threshold[node[active]]
            node[active] = np.where(left, self._left[node[active]], self._right[node[active]])
        return self._value[node]

    def resource_info(self) -> ResourceInfo:
        internal = int(np.sum(self._feature >= 0))
        leaves = len(self._feature) - internal
        macs = int(round(self._weighted_depth / max(self._n_train, 1)))
        return ResourceInfo.from_macs(3 * internal + leaves, macs)
