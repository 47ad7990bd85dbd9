"""
LIME-style explainer: neighborhood sampling, kernel weighting and greedy
forward feature selection over weighted ridge fits.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike, NDArray

from leaf.data.dataset import FeatureStats
from leaf.explainers.neighborhood import kernel_weights, sample_neighborhood
from leaf.explainers.ridge import ridge_loss, weighted_ridge_fit
from leaf.models.base import BlackBox
from leaf.schema.explanation import ExplanationMeta, LinearExplanation, NeighborhoodConfig
from leaf.schema.models import ExplainerMethod
from leaf.utils.error_handler import ExplainerError, SingularSystemError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelectionStep:
    """State of forward selection after adding `selected[-1]`."""

    selected: tuple[int, ...]
    intercept: float
    coefficients: NDArray[np.float64]
    loss: float


def forward_select(
    points: NDArray[np.float64],
    targets: NDArray[np.float64],
    sample_weights: NDArray[np.float64],
    K: int,
    alpha: float,
) -> list[SelectionStep]:
    """
    Greedy forward selection of K columns.

    Each step adds the column whose inclusion gives the lowest penalized
    weighted ridge loss; ties go to the lowest index. Returns one step per
    added column, so `steps[k - 1]` is the k-feature model.
    """
    n_features = points.shape[1]
    selected: list[int] = []
    steps: list[SelectionStep] = []
    for _ in range(K):
        best: SelectionStep | None = None
        for candidate in range(n_features):
            if candidate in selected:
                continue
            columns = [*selected, candidate]
            try:
                intercept, coefficients = weighted_ridge_fit(
                    points[:, columns], targets, sample_weights, alpha
                )
            except SingularSystemError:
                logger.debug(f"SFS: skipping feature {candidate}, singular with {selected}")
                continue
            loss = ridge_loss(
                points[:, columns], targets, sample_weights, alpha, intercept, coefficients
            )
            if best is None or loss < best.loss:
                best = SelectionStep(tuple(columns), intercept, coefficients, loss)
        if best is None:
            raise SingularSystemError(
                f"no feature can be added to {selected} without a singular system; "
                "use a ridge penalty alpha > 0"
            )
        selected = list(best.selected)
        steps.append(best)
        logger.debug(f"SFS: added feature {selected[-1]}, loss {best.loss:.6g}")
    return steps


def explain_lime(
    f: BlackBox,
    x: ArrayLike,
    K: int,
    cfg: NeighborhoodConfig,
    stats: FeatureStats,
) -> LinearExplanation:
    """
    Explain f around x with at most K features.

    Args:
        f: Black box to explain
        x: Instance (length F)
        K: Conciseness bound, 1 <= K <= F
        cfg: Neighborhood size, kernel width, ridge penalty and seed
        stats: Feature standard deviations used to perturb x

    Returns:
        A LinearExplanation in raw feature units; features whose final weight
        is exactly zero are dropped from the support
    """
    x = np.asarray(x, dtype=float)
    n_features = f.n_features
    if not 1 <= K <= n_features:
        raise ExplainerError(f"K={K} outside [1, {n_features}]")

    neighborhood = sample_neighborhood(x, stats, cfg)
    gamma = cfg.resolve_kernel_width(n_features)
    weights = kernel_weights(x, neighborhood, gamma, scale=stats.stddev)
    targets = f.predict_batch(neighborhood)

    final = forward_select(neighborhood, targets, weights, K, cfg.ridge_alpha)[-1]
    kept = [
        (int(index), float(weight))
        for index, weight in zip(final.selected, final.coefficients)
        if weight != 0.0
    ]
    return LinearExplanation(
        method=ExplainerMethod.LIME,
        seed=cfg.seed,
        K=K,
        n_features=n_features,
        intercept=float(final.intercept),
        weights=dict(kept),
        selected=[index for index, _ in kept],
        meta=ExplanationMeta(gamma=gamma, H=cfg.n_samples),
    )
