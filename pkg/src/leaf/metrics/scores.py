"""
Per-explanation scores: conciseness, local fidelity and local concordance.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from leaf.data.dataset import FeatureStats
from leaf.explainers.neighborhood import sample_neighborhood
from leaf.models.base import BlackBox
from leaf.schema.explanation import LinearExplanation, NeighborhoodConfig
from leaf.utils.error_handler import MetricError

THRESHOLD = 0.5


def conciseness(g: LinearExplanation) -> int:
    """Number of features with a non-zero weight."""
    return sum(1 for weight in g.weights.values() if weight != 0.0)


def binarize(values: ArrayLike) -> NDArray[np.bool_]:
    """Class 1 when value >= 1/2."""
    return np.asarray(values, dtype=float) >= THRESHOLD


def f1_score(reference: ArrayLike, predicted: ArrayLike) -> float:
    """
    F1 of `predicted` against `reference`, class 1 positive.

    Two identical vectors score 1 even without positives; otherwise an empty
    denominator scores 0.
    """
    reference = np.asarray(reference, dtype=bool)
    predicted = np.asarray(predicted, dtype=bool)
    if reference.shape != predicted.shape:
        raise MetricError(f"length mismatch: {reference.shape} vs {predicted.shape}")
    if np.array_equal(reference, predicted):
        return 1.0
    tp = int(np.sum(reference & predicted))
    fp = int(np.sum(~reference & predicted))
    fn = int(np.sum(reference & ~predicted))
    denominator = 2 * tp + fp + fn
    if denominator == 0:
        return 0.0
    return 2 * tp / denominator


def local_fidelity(
    f: BlackBox,
    g: LinearExplanation,
    x: ArrayLike,
    stats: FeatureStats,
    cfg: NeighborhoodConfig,
) -> float:
    """
    F1 agreement of the binarized f and g on a fresh neighborhood of x.

    The neighborhood is drawn with `cfg.seed`; callers pass a seed distinct
    from the one the explainer used.
    """
    points = sample_neighborhood(x, stats, cfg)
    return f1_score(binarize(f.predict_batch(points)), binarize(g.evaluate_batch(points)))


def local_concordance(f: BlackBox, g: LinearExplanation, x: ArrayLike) -> float:
    """max(0, 1 - |f(x) - g(x)|)."""
    return max(0.0, 1.0 - abs(f.predict(x) - g.evaluate(x)))
