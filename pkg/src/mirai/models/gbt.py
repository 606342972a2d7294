"""Gradient boosted regression trees on logistic loss with Newton leaf values."""

from __future__ import annotations

import math

import numpy as np

from ..errors import ConfigError
from .base import ClassifierHandle, ResourceInfo, sigmoid


class _RegTree:
    """Depth-limited least-squares tree storing Newton leaf values."""

    __slots__ = ("feature", "threshold", "left", "right", "value",
                 "weighted_depth", "n_train")

    def __init__(self):
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []
        self.weighted_depth = 0.0
        self.n_train = 0

    def new_node(self):
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.value.append(0.0)
        return len(self.feature) - 1

    def freeze(self):
        self.feature = np.asarray(self.feature, dtype=np.int64)
        self.threshold = np.asarray(self.threshold, dtype=np.float64)
        self.left = np.asarray(self.left, dtype=np.int64)
        self.right = np.asarray(self.right, dtype=np.int64)
        self.value = np.asarray(self.value, dtype=np.float64)

    def predict(self, X):
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        while True:
            feat = self.feature[node]
            active = feat >= 0
            if not active.any():
                break
            r = rows[active]
            left = X[r, feat[active]] <= self.threshold[node[active]]
            node[active] = np.where(left, self.left[node[active]], self.right[node[active]])
        return self.value[node]

    def counts(self):
        internal = int(np.sum(self.feature >= 0))
        leaves = len(self.feature) - internal
        mean_path = self.weighted_depth / max(self.n_train, 1)
        return 3 * internal + leaves, mean_path


class GradientBoostedTrees(ClassifierHandle):
    """Boosting on the logistic loss.

    Each round fits a variance-reduction regression tree to the negative
    gradient and sets leaf values by a damped Newton step sum(g)/sum(h).
    The raw score starts at the log-odds of the training base rate, so zero
    rounds give the constant base-rate model. No row or feature subsampling
    is used, which makes training deterministic without a seed.
    """

    family = "gradient_boosted_trees"

    def __init__(self, model_id: str, n_trees: int = 50, depth: int = 3,
                 learning_rate: float = 0.1, min_leaf: int = 5, seed: int = 0):
        super().__init__(model_id, seed)
        if learning_rate <= 0:
            raise ConfigError("learning_rate must be positive")
        if n_trees < 0:
            raise ConfigError("n_trees must be non-negative")
        if depth < 1:
            raise ConfigError("depth must be at least 1")
        self.n_trees = int(n_trees)
        self.depth = int(depth)
        self.learning_rate = float(learning_rate)
        self.min_leaf = int(min_leaf)

    def _fit(self, X, y):
        yf = y.astype(np.float64)
        rate = float(np.clip(yf.mean(), 1e-12, 1 - 1e-12))
        self._f0 = math.log(rate / (1.0 - rate))
        self._trees: list[_RegTree] = []
        score = np.full(X.shape[0], self._f0)
        for _ in range(self.n_trees):
            p = sigmoid(score)
            g = yf - p
            h = p * (1.0 - p)
            tree = self._fit_tree(X, g, h)
            score = score + self.learning_rate * tree.predict(X)
            self.train_flops += 6 * X.shape[0]
            self._trees.append(tree)

    def _fit_tree(self, X, g, h):
        tree = _RegTree()
        tree.n_train = X.shape[0]
        self._grow(tree, X, g, h, np.arange(X.shape[0]), 0)
        tree.freeze()
        return tree

    def _grow(self, tree, X, g, h, idx, depth):
        node = tree.new_node()
        tree.value[node] = float(g[idx].sum() / (h[idx].sum() + 1e-12))
        if depth >= self.depth or len(idx) < 2 * self.min_leaf:
            tree.weighted_depth += len(idx) * depth
            return node
        found = self._best_split(X, g, idx)
        if found is None:
            tree.weighted_depth += len(idx) * depth
            return node
        j, thr = found
        tree.feature[node] = j
        tree.threshold[node] = thr
        go_left = X[idx, j] <= thr
        tree.left[node] = self._grow(tree, X, g, h, idx[go_left], depth + 1)
        tree.right[node] = self._grow(tree, X, g, h, idx[~go_left], depth + 1)
        return node

    def _best_split(self, X, g, idx):
        n = len(idx)
        g_node = g[idx]
        total = g_node.sum()
        base = np.dot(g_node, g_node) - total * total / n
        best = None
        for j in range(X.shape[1]):
            xs = X[idx, j]
            order = np.argsort(xs, kind="stable")
            xv = xs[order]
            if xv[0] == xv[-1]:
                continue
            gs = np.cumsum(g_node[order])[:-1]
            k = np.arange(1, n, dtype=np.float64)
            valid = xv[1:] > xv[:-1]
            valid &= (k >= self.min_leaf) & (n - k >= self.min_leaf)
            if not valid.any():
                continue
            # sse reduction = sum_left^2/k + sum_right^2/(n-k) - total^2/n
            gain = gs * gs / k + (total - gs) ** 2 / (n - k) - total * total / n
            gain[~valid] = -np.inf
            kk = int(np.argmax(gain))
            self.train_flops += n * (math.ceil(math.log2(max(n, 2))) + 8)
            if gain[kk] <= 1e-12:
                continue
            if best is None or gain[kk] > best[0] + 1e-12:
                best = (float(gain[kk]), j, float((xv[kk] + xv[kk + 1]) / 2.0))
        if best is None:
            return None
        _ = base
        return best[1], best[2]

    def _raw_score(self, X, n_trees=None):
        use = self._trees if n_trees is None else self._trees[:n_trees]
        score = np.full(X.shape[0], self._f0)
        for tree in use:
            score = score + self.learning_rate * tree.predict(X)
        return score

    def _proba(self, X):
        return sigmoid(self._raw_score(X))

    def staged_train_loss(self, X, y):
        """Mean logistic loss after each boosting round, round 0 first."""
        X = np.asarray(X, dtype=np.float64)
        yf = np.asarray(y, dtype=np.float64)
        losses = []
        score = np.full(X.shape[0], self._f0)
        for k in range(len(self._trees) + 1):
            p = np.clip(sigmoid(score), 1e-12, 1 - 1e-12)
            losses.append(float(-np.mean(yf * np.log(p) + (1 - yf) * np.log(1 - p))))
            if k < len(self._trees):
                score = score + self.learning_rate * self._trees[k].predict(X)
        return losses

    def resource_info(self) -> ResourceInfo:
        params = 1
        macs = 0.0
        for tree in self._trees:
            p, mean_path = tree.counts()
            params += p
            macs += mean_path + 1.0
        return ResourceInfo.from_macs(params, int(round(macs)))
