"""
Conversion of Shapley attributions into local linear explanations.
"""

import logging

import numpy as np
from numpy.typing import ArrayLike

from leaf.explainers.shapley import shapley_sampled
from leaf.models.base import BlackBox
from leaf.schema.explanation import ExplanationMeta, LinearExplanation, ShapleyAttribution
from leaf.schema.models import ExplainerMethod
from leaf.utils.error_handler import ExplainerError

logger = logging.getLogger(__name__)

FOLD_RTOL = 1e-9


def top_k_features(phi: ArrayLike, K: int) -> list[int]:
    """Indices of the K largest |phi|, ties broken by lower index."""
    phi = np.asarray(phi, dtype=float)
    order = sorted(range(phi.shape[0]), key=lambda i: (-abs(phi[i]), i))
    return order[:K]


def to_lle(attr: ShapleyAttribution, x: ArrayLike, K: int) -> LinearExplanation:
    """
    Keep the top-K attributions and express them as a linear model.

    With mu the background mean, a kept feature gets w_i = phi_i / (x_i - mu_i)
    and g is written around mu, so g(x) = phi_0 + sum of the kept phi_i. When
    x_i is within 1e-9·max(1, |x_i|, |mu_i|) of mu_i the weight would blow up;
    phi_i is then folded into the intercept and feature i drops out of the
    support.
    """
    x = np.asarray(x, dtype=float)
    n_features = attr.n_features
    if x.shape != (n_features,):
        raise ExplainerError(f"expected an instance of length {n_features}, got {x.shape}")
    if not 1 <= K <= n_features:
        raise ExplainerError(f"K={K} outside [1, {n_features}]")

    mu = attr.background_mean()
    intercept = attr.phi0
    weights: dict[int, float] = {}
    folded: list[int] = []
    for index in top_k_features(attr.phi, K):
        phi_i = attr.phi[index]
        gap = x[index] - mu[index]
        if abs(gap) <= FOLD_RTOL * max(1.0, abs(x[index]), abs(mu[index])):
            intercept += phi_i
            folded.append(index)
            continue
        weight = phi_i / gap
        if weight == 0.0:
            continue
        weights[index] = weight
        intercept -= weight * mu[index]

    if folded:
        logger.debug(f"to_lle: folded features {folded} into the intercept")
    return LinearExplanation(
        method=ExplainerMethod.SHAP,
        seed=attr.seed,
        K=K,
        n_features=n_features,
        intercept=float(intercept),
        weights={i: float(w) for i, w in weights.items()},
        selected=list(weights),
        meta=ExplanationMeta(budget=attr.budget, mode=attr.mode, folded=folded),
    )


def explain_shap(
    f: BlackBox,
    x: ArrayLike,
    K: int,
    background: ArrayLike,
    budget: int | None = None,
    seed: int = 0,
) -> LinearExplanation:
    """Shapley attribution (exact when the budget allows) turned into a K-feature LLE."""
    if not 1 <= K <= f.n_features:
        raise ExplainerError(f"K={K} outside [1, {f.n_features}]")
    attribution = shapley_sampled(f, x, background, budget=budget, seed=seed)
    return to_lle(attribution, x, K)
