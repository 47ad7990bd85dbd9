"""
Grid-search reference for the nearest boundary point of an explanation.

Directions in the subspace of the explained features are laid on an angular
grid; along each one the crossing of g = y' is located by bisection on
evaluations of g. The grid is then re-centred on the best direction and
narrowed for a few rounds.
"""

import itertools

import numpy as np
from numpy.typing import ArrayLike, NDArray

from leaf.schema.explanation import LinearExplanation
from leaf.utils.error_handler import OracleError

MAX_SUPPORT = 3
BISECTION_STEPS = 60
NARROWING = 0.2


def _directions(angles: NDArray[np.float64], k: int) -> NDArray[np.float64]:
    """Unit vectors in R^k for rows of angles ((n, 1) for k=2, (n, 2) for k=3)."""
    if k == 2:
        theta = angles[:, 0]
        return np.column_stack([np.cos(theta), np.sin(theta)])
    theta, phi = angles[:, 0], angles[:, 1]
    return np.column_stack(
        [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta)]
    )


def _crossings(
    g: LinearExplanation,
    x: NDArray[np.float64],
    support: list[int],
    directions: NDArray[np.float64],
    target: float,
    radius: float,
) -> NDArray[np.float64]:
    """Distance to g = target along each direction, inf when not reached within radius."""

    def residual(t: NDArray[np.float64]) -> NDArray[np.float64]:
        points = np.repeat(x[None, :], directions.shape[0], axis=0)
        points[:, support] += t[:, None] * directions
        return g.evaluate_batch(points) - target

    low = np.zeros(directions.shape[0])
    high = np.full(directions.shape[0], radius)
    at_low = residual(low)
    reachable = at_low * residual(high) <= 0
    for _ in range(BISECTION_STEPS):
        middle = (low + high) / 2
        at_middle = residual(middle)
        same_side = at_middle * at_low > 0
        low = np.where(same_side, middle, low)
        high = np.where(same_side, high, middle)
        at_low = np.where(same_side, at_middle, at_low)
    return np.where(reachable, (low + high) / 2, np.inf)


def projection_oracle(
    g: LinearExplanation,
    x: ArrayLike,
    target: float,
    radius: float,
    steps: int = 90,
    rounds: int = 6,
) -> NDArray[np.float64]:
    """
    Nearest point x' to x with g(x') = target, moving only explained features.

    Args:
        g: Explanation with at most three non-zero weights
        x: Instance
        target: Boundary value y'
        radius: Search ball radius around x
        steps: Grid points per angle
        rounds: Narrowing rounds after the initial grid

    Raises:
        OracleError: support too large, or no boundary point within the radius
    """
    x = np.asarray(x, dtype=float)
    support = [index for index in g.selected if g.weights[index] != 0.0]
    if len(support) > MAX_SUPPORT:
        raise OracleError(
            f"grid search supports at most {MAX_SUPPORT} features, got {len(support)}"
        )
    if not support:
        raise OracleError("no feasible point: explanation has no non-zero weight")
    k = len(support)

    if k == 1:
        directions = np.array([[1.0], [-1.0]])
        distances = _crossings(g, x, support, directions, target, radius)
        best = int(np.argmin(distances))
        if not np.isfinite(distances[best]):
            raise OracleError(f"no feasible point within radius {radius}")
        point = x.copy()
        point[support] += distances[best] * directions[best]
        return point

    spans = np.array([2 * np.pi] if k == 2 else [np.pi, 2 * np.pi])
    centres = spans / 2
    best_distance, best_point = np.inf, None
    for _ in range(rounds + 1):
        axes = [
            np.linspace(centre - span / 2, centre + span / 2, steps)
            for centre, span in zip(centres, spans)
        ]
        angles = np.array(list(itertools.product(*axes)))
        directions = _directions(angles, k)
        distances = _crossings(g, x, support, directions, target, radius)
        index = int(np.argmin(distances))
        if np.isfinite(distances[index]) and distances[index] < best_distance:
            best_distance = float(distances[index])
            best_point = x.copy()
            best_point[support] += best_distance * directions[index]
            centres = angles[index]
        elif best_point is None:
            raise OracleError(f"no feasible point within radius {radius}")
        spans = spans * NARROWING
    assert best_point is not None
    return best_point
