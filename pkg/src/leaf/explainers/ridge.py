"""
Weighted ridge regression with an unpenalized intercept.

Minimizes sum_j w_j (y_j - b - c·z_j)² + alpha·||c||². The intercept is
eliminated by weighted centering, and the remaining normal equations are
solved with a Cholesky factorization.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg

from leaf.utils.error_handler import ExplainerError, SingularSystemError

PIVOT_RTOL = 1e-13


def _check_inputs(
    points: NDArray[np.float64], targets: NDArray[np.float64], weights: NDArray[np.float64]
) -> None:
    if points.ndim != 2:
        raise ExplainerError(f"points must be a 2-D matrix, got shape {points.shape}")
    n, k = points.shape
    if targets.shape != (n,) or weights.shape != (n,):
        raise ExplainerError(
            f"{n} points need {n} targets and weights, got {targets.shape} and {weights.shape}"
        )
    if n < k + 1:
        raise ExplainerError(f"need at least {k + 1} points for {k} coefficients, got {n}")
    if np.any(weights < 0) or not np.any(weights > 0):
        raise ExplainerError("sample weights must be non-negative and not all zero")


def weighted_ridge_fit(
    points: ArrayLike, targets: ArrayLike, sample_weights: ArrayLike, alpha: float
) -> tuple[float, NDArray[np.float64]]:
    """
    Weighted ridge fit.

    Args:
        points: (N, k) design, k may be 0
        targets: (N,) regression targets
        sample_weights: (N,) non-negative, not all zero
        alpha: Ridge penalty on the coefficients, >= 0

    Returns:
        (intercept, coefficients of length k)

    Raises:
        SingularSystemError: alpha = 0 and the weighted design is rank deficient
        ExplainerError: shapes or weights violate the preconditions
    """
    points = np.asarray(points, dtype=float)
    targets = np.asarray(targets, dtype=float)
    weights = np.asarray(sample_weights, dtype=float)
    _check_inputs(points, targets, weights)
    if alpha < 0:
        raise ExplainerError(f"ridge penalty must be >= 0, got {alpha}")

    total = weights.sum()
    z_mean = weights @ points / total
    y_mean = float(weights @ targets / total)
    if points.shape[1] == 0:
        return y_mean, np.zeros(0)

    centered = points - z_mean
    weighted = centered * weights[:, None]
    gram = centered.T @ weighted
    gram[np.diag_indices_from(gram)] += alpha
    rhs = weighted.T @ (targets - y_mean)

    hint = "; use a ridge penalty alpha > 0" if alpha == 0 else ""
    try:
        factor = linalg.cho_factor(gram)
    except linalg.LinAlgError as e:
        raise SingularSystemError(f"singular normal equations (collinear inputs){hint}") from e
    pivots = np.abs(np.diag(factor[0]))
    # rounding can leave a tiny positive pivot instead of a failed factorization
    floor = PIVOT_RTOL * max(pivots.max() ** 2, np.finfo(float).tiny)
    if alpha == 0 and pivots.min() ** 2 <= floor:
        raise SingularSystemError(f"singular normal equations (collinear inputs){hint}")
    coefficients = linalg.cho_solve(factor, rhs)
    if not np.all(np.isfinite(coefficients)):
        raise SingularSystemError("normal equations produced non-finite coefficients")
    return y_mean - float(z_mean @ coefficients), coefficients


def ridge_loss(
    points: ArrayLike,
    targets: ArrayLike,
    sample_weights: ArrayLike,
    alpha: float,
    intercept: float,
    coefficients: ArrayLike,
) -> float:
    """The penalized objective a `weighted_ridge_fit` solution minimizes."""
    coefficients = np.asarray(coefficients, dtype=float)
    residual = np.asarray(targets, dtype=float) - intercept - np.asarray(points) @ coefficients
    return float(np.asarray(sample_weights) @ residual**2 + alpha * coefficients @ coefficients)
