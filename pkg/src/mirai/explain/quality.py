"""Eight explanation-quality metrics and their four-subcategory aggregate."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def pearson(a, b) -> float:
    """Pearson correlation with r := 0 when either side has zero variance."""
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    da = a - a.mean()
    db = b - b.mean()
    na = np.sqrt(np.dot(da, da))
    nb = np.sqrt(np.dot(db, db))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(np.clip(np.dot(da, db) / (na * nb), -1.0, 1.0))


def local_lipschitz(explain_fn, x, radius: float, n_perturb: int, rng) -> float:
    """aligned = 1/(1+L), L the worst explanation change per unit input change
    over uniform-ball perturbations."""
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[0]
    e_x = np.asarray(explain_fn(x), dtype=np.float64)
    worst = 0.0
    for _ in range(n_perturb):
        u = rng.normal(size=d)
        norm = np.linalg.norm(u)
        if norm == 0.0:
            continue
        r = radius * rng.uniform() ** (1.0 / d)
        x_p = x + (r / norm) * u
        dist = np.linalg.norm(x_p - x)
        if dist == 0.0:
            continue
        e_p = np.asarray(explain_fn(x_p), dtype=np.float64)
        worst = max(worst, float(np.linalg.norm(e_x - e_p) / dist))
    return 1.0 / (1.0 + worst)


def _rank_signature(row):
    return tuple(np.argsort(-np.asarray(row), kind="stable").tolist())


def consistency(attributions, predictions) -> float:
    """Mean over rows of the share of same-prediction rows whose attribution
    rank signature matches the row's own."""
    attributions = np.asarray(attributions, dtype=np.float64)
    predictions = np.asarray(predictions).reshape(-1)
    sigs = [_rank_signature(row) for row in attributions]
    scores = []
    for i in range(len(sigs)):
        same_pred = [j for j in range(len(sigs)) if predictions[j] == predictions[i]]
        share = sum(1 for j in same_pred if sigs[j] == sigs[i]) / len(same_pred)
        scores.append(share)
    return float(np.mean(scores))


def faithfulness_correlation(predict_fn, phi, x, baseline, subset_size: int,
                             n_subsets: int, rng) -> float:
    """Correlation between attribution-subset sums and the output drop when
    that subset is moved to the baseline; aligned = (r+1)/2."""
    x = np.asarray(x, dtype=np.float64)
    phi = np.asarray(phi, dtype=np.float64)
    d = x.shape[0]
    subset_size = min(subset_size, d)
    subsets = [rng.choice(d, size=subset_size, replace=False) for _ in range(n_subsets)]
    ablated = np.tile(x, (n_subsets, 1))
    for i, s in enumerate(subsets):
        ablated[i, s] = baseline[s]
    f_x = float(predict_fn(x[None, :])[0])
    drops = f_x - predict_fn(ablated)
    sums = np.array([phi[s].sum() for s in subsets])
    return (pearson(sums, drops) + 1.0) / 2.0


def faithfulness_estimate(predict_fn, phi, x, baseline) -> float:
    """Correlation between per-feature attributions and single-feature
    ablation drops; aligned = (r+1)/2."""
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[0]
    ablated = np.tile(x, (d, 1))
    ablated[np.arange(d), np.arange(d)] = baseline
    f_x = float(predict_fn(x[None, :])[0])
    drops = f_x - predict_fn(ablated)
    return (pearson(phi, drops) + 1.0) / 2.0


def mean_row_correlation(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return float(np.mean([pearson(a[i], b[i]) for i in range(a.shape[0])]))


def param_randomization_score(original, randomized) -> float:
    """aligned = 0.5 + (1 - mean row correlation)/4: insensitive explanations
    (rho 1) sit at the neutral 0.5, decorrelated ones at 0.75, anti-correlated
    ones at 1."""
    rho = mean_row_correlation(original, randomized)
    return float(np.clip(0.5 + (1.0 - rho) / 4.0, 0.0, 1.0))


def random_logit_score(predicted_class_expl, other_class_expl) -> float:
    """aligned = (1 - mean row correlation)/2 between the explanations of the
    two class outputs."""
    rho = mean_row_correlation(predicted_class_expl, other_class_expl)
    return float(np.clip((1.0 - rho) / 2.0, 0.0, 1.0))


def sparseness(attribution_row) -> float:
    """Gini index of attribution magnitudes; 0 for uniform or all-zero rows."""
    a = np.sort(np.abs(np.asarray(attribution_row, dtype=np.float64)))
    n = a.shape[0]
    total = a.sum()
    if total == 0.0 or n == 0:
        return 0.0
    i = np.arange(1, n + 1)
    return float(np.dot(2 * i - n - 1, a) / (n * total))


def complexity_entropy(attribution_row) -> float:
    """aligned = 1 - H(p)/ln d for p the normalized attribution magnitudes;
    all-zero rows score 0."""
    a = np.abs(np.asarray(attribution_row, dtype=np.float64))
    total = a.sum()
    n = a.shape[0]
    if total == 0.0 or n < 2:
        return 0.0
    p = a / total
    nz = p[p > 0]
    h = float(-np.sum(nz * np.log(nz)))
    return float(np.clip(1.0 - h / np.log(n), 0.0, 1.0))


@dataclass(frozen=True)
class XaiSubscores:
    lipschitz: float
    consistency: float
    faithfulness_corr: float
    faithfulness_est: float
    param_randomization: float
    random_logit: float
    sparseness: float
    complexity: float

    @property
    def robustness_expl(self) -> float:
        return (self.lipschitz + self.consistency) / 2.0

    @property
    def faithfulness(self) -> float:
        return (self.faithfulness_corr + self.faithfulness_est) / 2.0

    @property
    def randomization(self) -> float:
        return (self.param_randomization + self.random_logit) / 2.0

    @property
    def complexity_sub(self) -> float:
        return (self.sparseness + self.complexity) / 2.0

    def subcategories(self) -> dict[str, float]:
        return {
            "robustness_expl": self.robustness_expl,
            "faithfulness": self.faithfulness,
            "randomization": self.randomization,
            "complexity": self.complexity_sub,
        }


def explainability_dimension(subcategories) -> float:
    """Mean of the four subcategory scores (each itself a pair mean)."""
    if isinstance(subcategories, XaiSubscores):
        values = list(subcategories.subcategories().values())
    else:
        values = [float(v) for v in subcategories]
    return float(np.mean(values))
