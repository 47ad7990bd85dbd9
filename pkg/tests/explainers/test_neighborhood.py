import math

import numpy as np
import pytest

from leaf.data import FeatureStats
from leaf.explainers import kernel_weight, kernel_weights, sample_neighborhood
from leaf.schema.explanation import NeighborhoodConfig, default_kernel_width
from leaf.utils.error_handler import ExplainerError


def _stats(stddev):
    stddev = np.asarray(stddev, dtype=float)
    return FeatureStats(mean=np.zeros_like(stddev), stddev=stddev)


def test_zero_stddev_leaves_x_unchanged():
    x = np.array([1.0, -2.0, 3.5])
    points = sample_neighborhood(x, _stats([0, 0, 0]), NeighborhoodConfig(n_samples=20, seed=1))
    assert points.shape == (20, 3)
    assert np.all(points == x)


def test_single_sample():
    points = sample_neighborhood([0.0, 0.0], _stats([1, 1]), NeighborhoodConfig(n_samples=1))
    assert points.shape == (1, 2)


def test_zero_samples_rejected():
    with pytest.raises(ValueError):
        NeighborhoodConfig(n_samples=0)


def test_sample_statistics():
    x = np.array([3.0, -1.0])
    points = sample_neighborhood(x, _stats([2.0, 0.5]), NeighborhoodConfig(n_samples=5000, seed=4))
    assert 1.9 <= points[:, 0].std() <= 2.1
    assert abs(points[:, 0].mean() - 3.0) <= 0.09
    assert abs(points[:, 1].mean() + 1.0) <= 0.03


def test_seed_determinism():
    stats = _stats([1.0, 1.0, 1.0])
    a = sample_neighborhood(np.zeros(3), stats, NeighborhoodConfig(n_samples=50, seed=9))
    b = sample_neighborhood(np.zeros(3), stats, NeighborhoodConfig(n_samples=50, seed=9))
    c = sample_neighborhood(np.zeros(3), stats, NeighborhoodConfig(n_samples=50, seed=10))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_instance_dimension_checked():
    with pytest.raises(ExplainerError, match="3 features"):
        sample_neighborhood(np.zeros(2), _stats([1, 1, 1]), NeighborhoodConfig())


class TestKernel:
    """Exponential distance kernel."""

    def test_zero_distance(self):
        assert kernel_weight([1.0, 2.0], [1.0, 2.0], 0.7) == 1.0

    def test_distance_equal_to_width(self):
        assert kernel_weight([0.0, 0.0], [0.6, 0.8], 1.0) == pytest.approx(math.exp(-1))

    def test_default_width_sixteen_features(self):
        gamma = default_kernel_width(16)
        assert gamma == pytest.approx(3.0)
        z = np.zeros(16)
        z[0] = 3.0
        assert kernel_weight(np.zeros(16), z, gamma) == pytest.approx(0.367879, abs=1e-6)

    def test_resolve_kernel_width(self):
        assert NeighborhoodConfig().resolve_kernel_width(16) == pytest.approx(3.0)
        assert NeighborhoodConfig(kernel_width=0.5).resolve_kernel_width(16) == 0.5

    def test_non_positive_width(self):
        with pytest.raises(ExplainerError):
            kernel_weight([0.0], [1.0], 0.0)

    def test_batch_matches_single(self):
        rng = np.random.default_rng(0)
        x = rng.normal(size=4)
        points = rng.normal(size=(10, 4))
        batch = kernel_weights(x, points, 1.3)
        single = [kernel_weight(x, z, 1.3) for z in points]
        np.testing.assert_allclose(batch, single, rtol=1e-14)

    def test_scaled_distance(self):
        weights = kernel_weights([0.0, 0.0], [[2.0, 0.0]], 1.0, scale=[2.0, 0.0])
        assert weights[0] == pytest.approx(math.exp(-1))

    def test_scaled_distance_ignores_units(self):
        rng = np.random.default_rng(3)
        x = rng.normal(size=3)
        points = x + rng.normal(size=(20, 3))
        stddev = np.array([1.0, 0.5, 2.0])
        units = np.array([1000.0, 1.0, 0.01])
        raw = kernel_weights(x, points, 1.5, scale=stddev)
        rescaled = kernel_weights(x * units, points * units, 1.5, scale=stddev * units)
        np.testing.assert_allclose(rescaled, raw, rtol=1e-12)
