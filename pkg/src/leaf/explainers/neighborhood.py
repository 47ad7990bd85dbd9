"""
Synthetic neighborhoods and the exponential distance kernel.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from leaf.data.dataset import FeatureStats
from leaf.schema.explanation import NeighborhoodConfig
from leaf.utils.error_handler import ExplainerError


def sample_neighborhood(
    x: ArrayLike, stats: FeatureStats, cfg: NeighborhoodConfig
) -> NDArray[np.float64]:
    """
    H perturbed copies of x: row j = x + p_j, p_j ~ N(0, diag(stddev²)).

    Features with zero stddev are never perturbed. The same `cfg.seed` gives
    the same matrix.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (stats.n_features,):
        raise ExplainerError(
            f"instance has shape {x.shape}, feature stats describe {stats.n_features} features"
        )
    if not np.all(np.isfinite(x)):
        raise ExplainerError("instance must be finite")
    rng = np.random.default_rng(cfg.seed)
    noise = rng.standard_normal((cfg.n_samples, stats.n_features))
    return x + noise * stats.stddev


def kernel_weight(x: ArrayLike, z: ArrayLike, gamma: float) -> float:
    """pi_x(z) = exp(-||x - z||² / gamma²)."""
    if gamma <= 0:
        raise ExplainerError(f"kernel width must be positive, got {gamma}")
    diff = np.asarray(x, dtype=float) - np.asarray(z, dtype=float)
    return float(np.exp(-np.dot(diff, diff) / gamma**2))


def kernel_weights(
    x: ArrayLike, points: ArrayLike, gamma: float, scale: ArrayLike | None = None
) -> NDArray[np.float64]:
    """
    Kernel weight of every row of `points`.

    With `scale` (per-feature stddev) the distance is measured in standardized
    units; zero-stddev features contribute nothing since they never move.
    """
    if gamma <= 0:
        raise ExplainerError(f"kernel width must be positive, got {gamma}")
    diff = np.asarray(points, dtype=float) - np.asarray(x, dtype=float)
    if scale is not None:
        scale = np.asarray(scale, dtype=float)
        diff = diff / np.where(scale > 0, scale, 1.0)
    return np.exp(-np.einsum("ij,ij->i", diff, diff) / gamma**2)
