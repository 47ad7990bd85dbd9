import numpy as np
import pytest

from leaf.explainers import ridge_loss, weighted_ridge_fit
from leaf.utils.error_handler import ExplainerError, SingularSystemError


def _normal_equations_oracle(points, targets, weights, alpha):
    """Augmented system [1, Z] with the intercept left unpenalized."""
    design = np.column_stack([np.ones(points.shape[0]), points])
    penalty = alpha * np.eye(design.shape[1])
    penalty[0, 0] = 0.0
    lhs = design.T @ (design * weights[:, None]) + penalty
    rhs = design.T @ (weights * targets)
    solution = np.linalg.solve(lhs, rhs)
    return solution[0], solution[1:]


def test_exact_linear_recovery():
    rng = np.random.default_rng(0)
    points = rng.normal(size=(40, 3))
    targets = 0.7 + points @ np.array([1.5, -2.0, 0.25])
    intercept, coefficients = weighted_ridge_fit(points, targets, np.ones(40), alpha=0.0)
    assert intercept == pytest.approx(0.7, abs=1e-9)
    np.testing.assert_allclose(coefficients, [1.5, -2.0, 0.25], atol=1e-9)


def test_uniform_weights_match_unweighted():
    rng = np.random.default_rng(1)
    points = rng.normal(size=(30, 2))
    targets = rng.normal(size=30)
    base = weighted_ridge_fit(points, targets, np.ones(30), alpha=0.0)
    scaled = weighted_ridge_fit(points, targets, np.full(30, 3.7), alpha=0.0)
    assert scaled[0] == pytest.approx(base[0], abs=1e-12)
    np.testing.assert_allclose(scaled[1], base[1], atol=1e-12)


def test_matches_normal_equations_oracle():
    rng = np.random.default_rng(2)
    points = rng.normal(size=(50, 3))
    targets = rng.normal(size=50)
    weights = rng.uniform(0.1, 2.0, size=50)
    intercept, coefficients = weighted_ridge_fit(points, targets, weights, alpha=1.0)
    expected_intercept, expected = _normal_equations_oracle(points, targets, weights, 1.0)
    assert intercept == pytest.approx(expected_intercept, abs=1e-8)
    np.testing.assert_allclose(coefficients, expected, atol=1e-8)


def test_solution_minimizes_loss():
    rng = np.random.default_rng(3)
    points = rng.normal(size=(25, 2))
    targets = rng.normal(size=25)
    weights = rng.uniform(size=25)
    intercept, coefficients = weighted_ridge_fit(points, targets, weights, alpha=0.5)
    best = ridge_loss(points, targets, weights, 0.5, intercept, coefficients)
    for _ in range(20):
        nudge = rng.normal(scale=1e-3, size=3)
        moved = ridge_loss(
            points, targets, weights, 0.5, intercept + nudge[0], coefficients + nudge[1:]
        )
        assert moved >= best


def test_collinear_without_penalty():
    rng = np.random.default_rng(4)
    column = rng.normal(size=20)
    points = np.column_stack([column, 2 * column])
    with pytest.raises(SingularSystemError, match="alpha > 0"):
        weighted_ridge_fit(points, rng.normal(size=20), np.ones(20), alpha=0.0)
    _, coefficients = weighted_ridge_fit(points, rng.normal(size=20), np.ones(20), alpha=1.0)
    assert np.all(np.isfinite(coefficients))


def test_no_columns_gives_weighted_mean():
    intercept, coefficients = weighted_ridge_fit(
        np.zeros((3, 0)), [1.0, 2.0, 4.0], [1.0, 1.0, 2.0], alpha=1.0
    )
    assert intercept == pytest.approx(11 / 4)
    assert coefficients.shape == (0,)


@pytest.mark.parametrize(
    "points, weights, match",
    [
        (np.zeros((2, 2)), np.ones(2), "at least 3 points"),
        (np.zeros((5, 1)), np.zeros(5), "not all zero"),
        (np.zeros((5, 1)), -np.ones(5), "non-negative"),
        (np.zeros((5, 1)), np.ones(4), "targets and weights"),
    ],
)
def test_preconditions(points, weights, match):
    targets = np.zeros(points.shape[0])
    with pytest.raises(ExplainerError, match=match):
        weighted_ridge_fit(points, targets, weights, alpha=1.0)
