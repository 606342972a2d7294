"""Kernel two-sample statistics and the permutation drift test."""

from __future__ import annotations

import numpy as np

from ..errors import MetricError


def _sq_dists(X, Y):
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    xx = np.sum(X * X, axis=1)
    yy = np.sum(Y * Y, axis=1)
    sq = xx[:, None] + yy[None, :] - 2.0 * (X @ Y.T)
    return np.maximum(sq, 0.0)


def rbf_kernel(X, Y, bandwidth: float):
    return np.exp(-_sq_dists(X, Y) / (2.0 * bandwidth ** 2))


def median_bandwidth(Z) -> tuple[float, list[str]]:
    """Median pairwise distance of the pooled sample; 1.0 with a flag when
    every point coincides."""
    sq = _sq_dists(Z, Z)
    iu = np.triu_indices(sq.shape[0], k=1)
    med = float(np.median(np.sqrt(sq[iu]))) if iu[0].size else 0.0
    if med == 0.0:
        return 1.0, ["bandwidth_fallback"]
    return med, []


def _resolve_bandwidth(X, Y, bandwidth):
    if bandwidth is not None:
        return float(bandwidth), []
    return median_bandwidth(np.vstack([np.atleast_2d(X), np.atleast_2d(Y)]))


def mmd2_unbiased(X, Y, bandwidth: float | None = None) -> float:
    """U-statistic estimate of squared MMD; can be negative under the null."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    m, n = X.shape[0], Y.shape[0]
    if m < 2 or n < 2:
        raise MetricError("mmd2_unbiased needs at least two rows per sample")
    bw, _ = _resolve_bandwidth(X, Y, bandwidth)
    kxx = rbf_kernel(X, X, bw)
    kyy = rbf_kernel(Y, Y, bw)
    kxy = rbf_kernel(X, Y, bw)
    term_x = (kxx.sum() - np.trace(kxx)) / (m * (m - 1))
    term_y = (kyy.sum() - np.trace(kyy)) / (n * (n - 1))
    return float(term_x + term_y - 2.0 * kxy.mean())


def mmd2_biased(X, Y, bandwidth: float | None = None) -> float:
    """V-statistic variant; non-negative, exactly 0 when X equals Y."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    bw, _ = _resolve_bandwidth(X, Y, bandwidth)
    term_x = rbf_kernel(X, X, bw).mean()
    term_y = rbf_kernel(Y, Y, bw).mean()
    return float(term_x + term_y - 2.0 * rbf_kernel(X, Y, bw).mean())


def mmd_permutation_test(X, Y, n_permutations: int, rng,
                         bandwidth: float | None = None):
    """p-value of the unbiased statistic under label permutations.

    The pooled kernel matrix is computed once; each permutation only needs
    one matrix-vector product. p = (1 + #{perm >= observed})/(P + 1), so the
    smallest attainable p is 1/(P+1).
    """
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    Y = np.atleast_2d(np.asarray(Y, dtype=np.float64))
    m, n_y = X.shape[0], Y.shape[0]
    if m < 2 or n_y < 2:
        raise MetricError("permutation test needs at least two rows per sample")
    if n_permutations < 1:
        raise MetricError("n_permutations must be positive")
    bw, flags = _resolve_bandwidth(X, Y, bandwidth)
    Z = np.vstack([X, Y])
    n = m + n_y
    K = rbf_kernel(Z, Z, bw)
    diag = np.diag(K)
    row_sums = K.sum(axis=1)
    total = K.sum()

    def u_stat(mask):
        s = mask.astype(np.float64)
        ks = K @ s
        sum_x = float(s @ ks) - float(diag @ s)
        in_y = 1.0 - s
        sum_y = (total - 2.0 * float(s @ row_sums) + float(s @ ks)) - float(diag @ in_y)
        cross = float(s @ row_sums) - float(s @ ks)
        return (sum_x / (m * (m - 1)) + sum_y / (n_y * (n_y - 1))
                - 2.0 * cross / (m * n_y))

    base_mask = np.zeros(n, dtype=bool)
    base_mask[:m] = True
    observed = u_stat(base_mask)
    count = 0
    for _ in range(n_permutations):
        mask = np.zeros(n, dtype=bool)
        mask[rng.permutation(n)[:m]] = True
        if u_stat(mask) >= observed:
            count += 1
    p_value = (1.0 + count) / (n_permutations + 1.0)
    return p_value, observed, flags
