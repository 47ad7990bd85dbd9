import numpy as np
import pytest

from leaf.data import FeatureStats
from leaf.metrics import (
    local_concordance,
    local_fidelity,
    normalizer,
    prescriptive_point,
    prescriptivity,
)
from leaf.models import FunctionBlackBox, LinearModel
from leaf.schema.explanation import LinearExplanation, NeighborhoodConfig
from leaf.schema.models import ExplainerMethod
from leaf.utils.error_handler import MetricError


def _explanation(intercept, weights, n_features):
    return LinearExplanation(
        method=ExplainerMethod.LIME,
        seed=0,
        K=max(len(weights), 1),
        n_features=n_features,
        intercept=intercept,
        weights=weights,
        selected=sorted(weights),
    )


def _constant(value, n_features):
    return FunctionBlackBox(lambda z: np.full(z.shape[0], value), n_features=n_features)


class TestPrescriptivePoint:
    def test_two_features(self):
        g = _explanation(0.0, {0: 1.0, 1: 1.0}, n_features=2)
        point = prescriptive_point(g, [0.0, 0.0])
        assert point.defined
        np.testing.assert_allclose(point.x_prime, [0.25, 0.25])
        assert g.evaluate(point.x_prime) == pytest.approx(0.5, abs=1e-12)

    def test_single_feature(self):
        g = _explanation(0.2, {1: 0.6}, n_features=3)
        point = prescriptive_point(g, [4.0, 0.0, -1.0])
        np.testing.assert_allclose(point.x_prime, [4.0, 0.5, -1.0])
        assert point.delta == [0.0, pytest.approx(0.5), 0.0]

    def test_lands_on_boundary(self, rng):
        for _ in range(50):
            n_features = int(rng.integers(2, 8))
            k = int(rng.integers(1, n_features + 1))
            chosen = rng.choice(n_features, size=k, replace=False)
            weights = {int(i): float(rng.normal()) for i in chosen}
            g = _explanation(float(rng.normal()), weights, n_features)
            target = float(rng.uniform(0.05, 0.95))
            x = rng.normal(size=n_features) * 3
            point = prescriptive_point(g, x, target)
            assert abs(g.evaluate(point.x_prime) - target) < 1e-9
            outside = [i for i in range(n_features) if i not in weights]
            assert all(point.delta[i] == 0.0 for i in outside)

    def test_undefined_without_weights(self):
        point = prescriptive_point(_explanation(0.3, {}, n_features=2), [1.0, 2.0])
        assert not point.defined
        assert point.x_prime == [1.0, 2.0]
        assert point.reason

    def test_on_boundary_is_defined_with_zero_step(self):
        g = _explanation(0.25, {0: 0.125, 1: 0.125}, n_features=2)
        point = prescriptive_point(g, [1.0, 1.0])
        assert point.defined
        assert point.reason is None
        assert point.x_prime == [1.0, 1.0]
        assert point.delta == [0.0, 0.0]
        assert prescriptivity(_constant(0.5, 2), g, [1.0, 1.0]) == 1.0

    @pytest.mark.parametrize("target", [0.0, 1.0, -0.2, 1.5])
    def test_target_range(self, target):
        g = _explanation(0.0, {0: 1.0}, n_features=1)
        with pytest.raises(MetricError, match="y'"):
            prescriptive_point(g, [0.0], target)

    def test_normalizer(self):
        assert normalizer(0.5) == 0.5
        assert normalizer(0.2) == 0.8
        assert normalizer(0.9) == 0.9


class TestPrescriptivity:
    def test_self_explanation(self, linear_box):
        g = _explanation(0.1, {0: 0.2, 1: -0.3, 2: 0.05}, n_features=3)
        assert prescriptivity(linear_box, g, np.zeros(3)) == pytest.approx(1.0, abs=1e-6)

    def test_near_miss(self):
        g = _explanation(0.3, {0: 0.4}, n_features=2)
        assert prescriptivity(_constant(0.49, 2), g, [0.0, 0.0]) == pytest.approx(0.98)

    def test_maximal_miss(self):
        g = _explanation(0.3, {0: 0.4}, n_features=2)
        assert prescriptivity(_constant(1.0, 2), g, [0.0, 0.0]) == 0.0

    def test_off_centre_target(self):
        g = _explanation(0.0, {0: 1.0}, n_features=1)
        # C = 0.8, |f(x') - y'| = 0.4
        assert prescriptivity(_constant(0.6, 1), g, [0.0], target=0.2) == pytest.approx(0.5)

    def test_undefined(self):
        g = _explanation(0.3, {}, n_features=2)
        assert prescriptivity(_constant(0.49, 2), g, [0.0, 0.0]) is None


def test_scores_stay_in_unit_interval(rng):
    n_features = 4
    f = LinearModel.from_coefficients(0.5, rng.normal(size=n_features))
    stats = FeatureStats(mean=np.zeros(n_features), stddev=np.ones(n_features))
    for case in range(200):
        k = int(rng.integers(0, n_features + 1))
        chosen = rng.choice(n_features, size=k, replace=False)
        g = _explanation(float(rng.normal()), {int(i): float(rng.normal()) for i in chosen}, 4)
        x = stats.mean if case % 10 == 0 else rng.normal(size=n_features) * 2
        cfg = NeighborhoodConfig(n_samples=30, seed=case)
        assert 0.0 <= local_fidelity(f, g, x, stats, cfg) <= 1.0
        assert 0.0 <= local_concordance(f, g, x) <= 1.0
        score = prescriptivity(f, g, x, float(rng.uniform(0.05, 0.95)))
        assert score is None or 0.0 <= score <= 1.0
