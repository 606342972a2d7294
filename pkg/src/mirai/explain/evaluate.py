"""Runs the attribution and quality-metric stack for one trained model."""

from __future__ import annotations

import numpy as np

from ..seeding import derive_rng
from .quality import (XaiSubscores, complexity_entropy, consistency,
                      faithfulness_correlation, faithfulness_estimate,
                      local_lipschitz, param_randomization_score,
                      random_logit_score, sparseness)
from .shap import ShapExplainer


def evaluate_explainability(handle, rows, background, options, seed: int):
    """Eight aligned metric values for one model on a fixed evaluation subset.

    The coalition sample is derived from the run seed alone, so every model
    in a cohort is explained against the same coalitions and the same
    background, and the randomized-parameter twin is compared like for like.
    Randomization-based checks need re-drawable continuous parameters; models
    without them receive the neutral 0.5 with a flag.
    """
    rows = np.asarray(rows, dtype=np.float64)
    background = np.asarray(background, dtype=np.float64)
    explainer = ShapExplainer(rows.shape[1], background, options["n_coalitions"],
                              derive_rng(seed, "shap-coalitions"))
    flags = list(explainer.flags)

    attr = explainer.explain_batch(handle.predict_proba, rows)
    A = attr.values
    preds = handle.predict(rows)

    def explain_fn(z):
        return explainer.explain(handle.predict_proba, z)[0]

    lip_scores = []
    for i in range(rows.shape[0]):
        rng = derive_rng(seed, "lipschitz", str(i))
        lip_scores.append(local_lipschitz(explain_fn, rows[i],
                                          options["lipschitz_radius"],
                                          options["lipschitz_neighbours"], rng))
    lip = float(np.mean(lip_scores))

    cons = consistency(A, preds)

    baseline = background.mean(axis=0)
    fc_scores = []
    fe_scores = []
    for i in range(rows.shape[0]):
        rng = derive_rng(seed, "faithfulness", str(i))
        fc_scores.append(faithfulness_correlation(
            handle.predict_proba, A[i], rows[i], baseline,
            options["faithfulness_size"], options["faithfulness_subsets"], rng))
        fe_scores.append(faithfulness_estimate(handle.predict_proba, A[i],
                                               rows[i], baseline))
    fc = float(np.mean(fc_scores))
    fe = float(np.mean(fe_scores))

    if handle.randomizable:
        twin = handle.randomize_parameters(derive_rng(seed, "param-randomization"))
        A_rand = explainer.explain_batch(twin.predict_proba, rows).values
        pr = param_randomization_score(A, A_rand)

        def other_class(z):
            return 1.0 - handle.predict_proba(z)

        A_other = explainer.explain_batch(other_class, rows).values
        e_pred = np.where(preds[:, None] == 1, A, A_other)
        e_alt = np.where(preds[:, None] == 1, A_other, A)
        rl = random_logit_score(e_pred, e_alt)
    else:
        pr = 0.5
        rl = 0.5
        flags.append("randomization_not_applicable")

    spars = float(np.mean([sparseness(A[i]) for i in range(A.shape[0])]))
    compl = float(np.mean([complexity_entropy(A[i]) for i in range(A.shape[0])]))

    subs = XaiSubscores(lipschitz=lip, consistency=cons, faithfulness_corr=fc,
                        faithfulness_est=fe, param_randomization=pr,
                        random_logit=rl, sparseness=spars, complexity=compl)
    return subs, flags
