"""Feature attribution and explanation-quality scoring."""

from .evaluate import evaluate_explainability
from .quality import (XaiSubscores, complexity_entropy, consistency,
                      explainability_dimension, faithfulness_correlation,
                      faithfulness_estimate, local_lipschitz,
                      mean_row_correlation, param_randomization_score,
                      pearson, random_logit_score, sparseness)
from .shap import AttributionMatrix, ShapExplainer, brute_force_shapley, kernel_shap

__all__ = [
    "AttributionMatrix", "ShapExplainer", "kernel_shap", "brute_force_shapley",
    "XaiSubscores", "evaluate_explainability", "explainability_dimension",
    "local_lipschitz", "consistency", "faithfulness_correlation",
    "faithfulness_estimate", "param_randomization_score", "random_logit_score",
    "sparseness", "complexity_entropy", "pearson", "mean_row_correlation",
]
