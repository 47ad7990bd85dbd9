from leaf.explainers.conversion import explain_shap, to_lle, top_k_features
from leaf.explainers.lime import explain_lime, forward_select
from leaf.explainers.neighborhood import kernel_weight, kernel_weights, sample_neighborhood
from leaf.explainers.registry import ExplainContext, Explainer, explain, explainers, get_explainer
from leaf.explainers.ridge import ridge_loss, weighted_ridge_fit
from leaf.explainers.shapley import (
    budget_floor,
    coalition_values,
    default_budget,
    shapley_exact,
    shapley_sampled,
)

__all__ = [
    "explain_shap",
    "to_lle",
    "top_k_features",
    "explain_lime",
    "forward_select",
    "kernel_weight",
    "kernel_weights",
    "sample_neighborhood",
    "ExplainContext",
    "Explainer",
    "explain",
    "explainers",
    "get_explainer",
    "ridge_loss",
    "weighted_ridge_fit",
    "budget_floor",
    "coalition_values",
    "default_budget",
    "shapley_exact",
    "shapley_sampled",
]
