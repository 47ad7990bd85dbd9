from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from leaf.data.dataset import FeatureStats
from leaf.explainers.conversion import explain_shap
from leaf.explainers.lime import explain_lime
from leaf.models.base import BlackBox
from leaf.schema.explanation import LinearExplanation, NeighborhoodConfig
from leaf.schema.models import ExplainerMethod
from leaf.utils.error_handler import ConfigError


@dataclass(frozen=True)
class ExplainContext:
    """
    Everything an explainer needs besides (f, x, K, seed).

    `neighborhood.seed` is ignored: the per-call seed wins.
    """

    stats: FeatureStats
    background: NDArray[np.float64]
    neighborhood: NeighborhoodConfig = field(default_factory=NeighborhoodConfig)
    shap_budget: int | None = None


ExplainFn = Callable[[BlackBox, ArrayLike, int, ExplainContext, int], LinearExplanation]


def _lime(f: BlackBox, x: ArrayLike, K: int, context: ExplainContext, seed: int):
    cfg = context.neighborhood.model_copy(update={"seed": seed})
    return explain_lime(f, x, K, cfg, context.stats)


def _shap(f: BlackBox, x: ArrayLike, K: int, context: ExplainContext, seed: int):
    return explain_shap(f, x, K, context.background, budget=context.shap_budget, seed=seed)


@dataclass
class Explainer:
    description: str
    explain: ExplainFn


explainers: dict[ExplainerMethod, Explainer] = {
    ExplainerMethod.LIME: Explainer(
        description="Neighborhood sampling with greedy forward selection of ridge fits.",
        explain=_lime,
    ),
    ExplainerMethod.SHAP: Explainer(
        description="Shapley values (exact or sampled) converted to a top-K linear model.",
        explain=_shap,
    ),
}


def get_explainer(method: ExplainerMethod | str) -> Explainer:
    try:
        return explainers[ExplainerMethod(method)]
    except (KeyError, ValueError):
        raise ConfigError(f"unknown explainer '{method}'") from None


def explain(
    method: ExplainerMethod | str,
    f: BlackBox,
    x: ArrayLike,
    K: int,
    context: ExplainContext,
    seed: int,
) -> LinearExplanation:
    return get_explainer(method).explain(f, x, K, context, seed)
