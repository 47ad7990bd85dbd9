"""
Prescriptive projection onto the explanation's decision boundary.

The target point x' is the closest point to x (Euclidean) with g(x') = y',
moving only the features g actually uses. Over that support the minimal-norm
step is h = (y' - g(x)) · w / ||w||².
"""

import numpy as np
from numpy.typing import ArrayLike

from leaf.models.base import BlackBox
from leaf.schema.explanation import LinearExplanation
from leaf.schema.metrics import PrescriptivePoint
from leaf.utils.error_handler import MetricError

DEFAULT_TARGET = 0.5


def _check_target(target: float) -> None:
    if not 0.0 < target < 1.0:
        raise MetricError(f"boundary value y' must lie in (0, 1), got {target}")


def normalizer(target: float) -> float:
    return max(target, 1.0 - target)


def _undefined(x: np.ndarray, target: float, reason: str) -> PrescriptivePoint:
    return PrescriptivePoint(
        x_prime=x.tolist(),
        delta=np.zeros_like(x).tolist(),
        target=target,
        normalizer=normalizer(target),
        defined=False,
        reason=reason,
    )


def prescriptive_point(
    g: LinearExplanation, x: ArrayLike, target: float = DEFAULT_TARGET
) -> PrescriptivePoint:
    """
    Project x onto {z : g(z) = target} along the support of g.

    Returns an undefined point (x' = x, zero step) when g has no non-zero
    weight, since no move of explained features reaches the boundary.
    """
    _check_target(target)
    x = np.asarray(x, dtype=float)
    w = g.weight_vector()
    norm_sq = float(w @ w)
    if norm_sq == 0.0:
        return _undefined(x, target, "explanation has no non-zero weight")
    delta = (target - g.evaluate(x)) * w / norm_sq
    if not np.all(np.isfinite(x + delta)):
        return _undefined(x, target, "boundary lies out of floating-point range")
    return PrescriptivePoint(
        x_prime=(x + delta).tolist(),
        delta=delta.tolist(),
        target=target,
        normalizer=normalizer(target),
        defined=True,
    )


def prescriptivity(
    f: BlackBox, g: LinearExplanation, x: ArrayLike, target: float = DEFAULT_TARGET
) -> float | None:
    """
    max(0, 1 - |f(x') - y'| / C) with C = max(y', 1 - y'); None when x' is undefined.
    """
    point = prescriptive_point(g, x, target)
    if not point.defined:
        return None
    return max(0.0, 1.0 - abs(f.predict(point.x_prime) - target) / point.normalizer)
