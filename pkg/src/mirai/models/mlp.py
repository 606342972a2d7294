"""Fully connected ReLU network with sigmoid head, trained by mini-batch descent."""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ..seeding import derive_rng
from .base import ClassifierHandle, ResourceInfo, sigmoid


def _forward_backward(Ws, bs, X, y):
    """Mean cross-entropy loss and its gradients for one parameter set."""
    acts = [X]
    a = X
    for W, b in zip(Ws[:-1], bs[:-1]):
        a = np.maximum(a @ W + b, 0.0)
        acts.append(a)
    z = (a @ Ws[-1] + bs[-1]).reshape(-1)
    p = sigmoid(z)
    eps = 1e-12
    loss = float(-np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)))
    m = X.shape[0]
    delta = ((p - y) / m).reshape(-1, 1)
    dWs = [None] * len(Ws)
    dbs = [None] * len(bs)
    for layer in range(len(Ws) - 1, -1, -1):
        dWs[layer] = acts[layer].T @ delta
        dbs[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ Ws[layer].T) * (acts[layer] > 0.0)
    return loss, dWs, dbs


class Mlp(ClassifierHandle):
    """Binary classifier network. The only cohort member whose continuous
    parameters can be re-drawn, which is what the randomization-based
    explanation checks require."""

    family = "mlp"
    randomizable = True

    def __init__(self, model_id: str, hidden_sizes=(64,), epochs: int = 200,
                 lr: float = 0.05, batch_size: int = 32, seed: int = 0):
        super().__init__(model_id, seed)
        hidden_sizes = list(hidden_sizes)
        if not hidden_sizes:
            raise ConfigError("hidden_sizes must not be empty")
        if any(int(h) < 1 for h in hidden_sizes):
            raise ConfigError("hidden sizes must be positive")
        if lr <= 0:
            raise ConfigError("lr must be positive")
        self.hidden_sizes = [int(h) for h in hidden_sizes]
        self.epochs = int(epochs)
        self.lr = float(lr)
        self.batch_size = int(batch_size)

    def _layer_dims(self, d_in):
        dims = [d_in] + self.hidden_sizes + [1]
        return list(zip(dims[:-1], dims[1:]))

    def _init_params(self, d_in, rng):
        Ws, bs = [], []
        for fan_in, fan_out in self._layer_dims(d_in):
            Ws.append(rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, fan_out)))
            bs.append(np.zeros(fan_out))
        return Ws, bs

    def _fit(self, X, y):
        n, d = X.shape
        self._d_in = d
        rng = derive_rng(self.seed, "mlp-init")
        self._Ws, self._bs = self._init_params(d, rng)
        shuffle = derive_rng(self.seed, "mlp-shuffle")
        yf = y.astype(np.float64)
        bsz = min(self.batch_size, n)
        for _ in range(self.epochs):
            order = shuffle.permutation(n)
            for start in range(0, n, bsz):
                take = order[start:start + bsz]
                _, dWs, dbs = _forward_backward(self._Ws, self._bs, X[take], yf[take])
                for k in range(len(self._Ws)):
                    self._Ws[k] = self._Ws[k] - self.lr * dWs[k]
                    self._bs[k] = self._bs[k] - self.lr * dbs[k]
        macs = sum(fi * fo for fi, fo in self._layer_dims(d))
        self.train_flops += 6.0 * self.epochs * n * macs

    def _proba(self, X):
        a = X
        for W, b in zip(self._Ws[:-1], self._bs[:-1]):
            a = np.maximum(a @ W + b, 0.0)
        return sigmoid((a @ self._Ws[-1] + self._bs[-1]).reshape(-1))

    def resource_info(self) -> ResourceInfo:
        dims = self._layer_dims(self._d_in)
        params = sum(fi * fo + fo for fi, fo in dims)
        macs = sum(fi * fo for fi, fo in dims)
        return ResourceInfo.from_macs(params, macs)

    def randomize_parameters(self, rng) -> "Mlp":
        """Untrained copy with freshly drawn weights, ready for prediction."""
        twin = Mlp(self.model_id + "-randomized", self.hidden_sizes,
                   self.epochs, self.lr, self.batch_size, self.seed)
        twin._d_in = self._d_in
        twin._Ws, twin._bs = twin._init_params(self._d_in, rng)
        twin._fitted = True
        return twin

    # flat-parameter views used by the finite-difference gradient check
    def flat_params(self):
        return np.concatenate([w.ravel() for w in self._Ws]
                              + [b.ravel() for b in self._bs])

    def loss_and_grad(self, X, y, theta):
        X = np.asarray(X, dtype=np.float64)
        yf = np.asarray(y, dtype=np.float64)
        Ws, bs = [], []
        pos = 0
        for fan_in, fan_out in self._layer_dims(X.shape[1]):
            Ws.append(theta[pos:pos + fan_in * fan_out].reshape(fan_in, fan_out))
            pos += fan_in * fan_out
        for fan_in, fan_out in self._layer_dims(X.shape[1]):
            bs.append(theta[pos:pos + fan_out])
            pos += fan_out
        loss, dWs, dbs = _forward_backward(Ws, bs, X, yf)
        grad = np.concatenate([g.ravel() for g in dWs] + [g.ravel() for g in dbs])
        return loss, grad
