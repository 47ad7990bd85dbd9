import numpy as np
import pytest

from leaf.explainers import (
    budget_floor,
    default_budget,
    shapley_exact,
    shapley_sampled,
)
from leaf.models import FunctionBlackBox, LinearModel, ModelSpec, train
from leaf.schema.models import ModelFamily, ShapleyMode
from leaf.utils.error_handler import ExplainerError


@pytest.fixture(scope="module")
def forest(drug):
    return train(ModelSpec(family=ModelFamily.RF, n_estimators=10, max_depth=4, seed=2), drug)


def test_single_feature():
    f = LinearModel.from_coefficients(0.2, [0.3])
    attr = shapley_exact(f, [1.5], [[0.5]])
    assert attr.phi0 == pytest.approx(f.predict([0.5]))
    assert attr.phi[0] == pytest.approx(f.predict([1.5]) - f.predict([0.5]), abs=1e-12)


def test_product_game(product_box):
    attr = shapley_exact(product_box, [1.0, 1.0], [[0.0, 0.0]])
    assert attr.phi0 == pytest.approx(0.0, abs=1e-12)
    assert attr.phi == pytest.approx([0.5, 0.5], abs=1e-12)
    assert attr.mode == ShapleyMode.EXACT
    assert attr.n_coalitions == 4


def test_linear_attributions():
    c = np.array([0.05, -0.1, 0.02, 0.08])
    f = LinearModel.from_coefficients(0.5, c)
    x = np.array([1.0, -0.5, 2.0, 0.3])
    mu = np.array([0.2, 0.1, -1.0, 0.0])
    attr = shapley_exact(f, x, mu)
    np.testing.assert_allclose(attr.phi, c * (x - mu), atol=1e-12)


def test_efficiency(forest, drug):
    background = drug.features.mean(axis=0)
    for x in drug.features[:5]:
        attr = shapley_exact(forest, x, background)
        assert attr.phi0 + sum(attr.phi) == pytest.approx(forest.predict(x), abs=1e-9)


def test_efficiency_multi_row_background(forest, drug):
    background = drug.features[:3]
    attr = shapley_exact(forest, drug.features[10], background)
    assert attr.phi0 == pytest.approx(np.mean(forest.predict_batch(background)), abs=1e-12)
    assert attr.phi0 + sum(attr.phi) == pytest.approx(forest.predict(drug.features[10]), abs=1e-9)
    assert len(attr.background) == 3


def test_symmetry():
    f = FunctionBlackBox(lambda z: 0.2 * z[:, 0] * z[:, 1] + 0.1 * z[:, 2], n_features=3)
    attr = shapley_exact(f, [1.5, 1.5, 0.7], [[0.2, 0.2, 0.0], [0.4, 0.4, 1.0]])
    assert attr.phi[0] == pytest.approx(attr.phi[1], abs=1e-9)


def test_null_player():
    f = FunctionBlackBox(lambda z: 0.3 + 0.1 * z[:, 0] * z[:, 2], n_features=3)
    attr = shapley_exact(f, [1.0, 5.0, 2.0], [[0.0, 0.0, 0.0]])
    assert attr.phi[1] == pytest.approx(0.0, abs=1e-9)


def test_exact_cap():
    f = LinearModel.from_coefficients(0.5, np.zeros(26))
    with pytest.raises(ExplainerError, match="shapley_sampled"):
        shapley_exact(f, np.zeros(26), np.zeros(26))


def test_background_shape_checked(product_box):
    with pytest.raises(ExplainerError, match="background"):
        shapley_exact(product_box, [1.0, 1.0], [[0.0, 0.0, 0.0]])


class TestSampled:
    """Budgeted regression estimator."""

    def test_budget_defaults(self):
        assert default_budget(10) == 2068
        assert budget_floor(15) == 32

    def test_delegates_to_exact(self, forest, drug):
        x = drug.features[7]
        background = drug.features.mean(axis=0)
        sampled = shapley_sampled(forest, x, background, seed=4)
        exact = shapley_exact(forest, x, background)
        assert sampled.mode == ShapleyMode.EXACT
        assert sampled.phi == exact.phi
        assert sampled.phi0 == exact.phi0
        assert sampled.budget == 2068
        assert shapley_sampled(forest, x, background, seed=99).phi == sampled.phi

    def test_budget_below_floor(self):
        f = LinearModel.from_coefficients(0.5, np.zeros(15))
        with pytest.raises(ExplainerError, match="floor"):
            shapley_sampled(f, np.zeros(15), np.zeros(15), budget=31)

    def test_linear_recovery(self):
        rng = np.random.default_rng(0)
        c = rng.uniform(-0.02, 0.02, size=15)
        f = LinearModel.from_coefficients(0.5, c)
        x = rng.uniform(-1, 1, size=15)
        mu = rng.uniform(-1, 1, size=15)
        attr = shapley_sampled(f, x, mu, seed=1)
        expected = c * (x - mu)
        assert attr.mode == ShapleyMode.SAMPLED
        assert np.max(np.abs(np.asarray(attr.phi) - expected)) <= 0.05 * np.max(np.abs(expected))

    def test_efficiency_and_budget(self):
        f = FunctionBlackBox(
            lambda z: 0.5 + 0.02 * z[:, 0] * z[:, 1] - 0.03 * np.sin(z[:, 2:]).sum(axis=1),
            n_features=15,
        )
        x = np.linspace(-1, 1, 15)
        attr = shapley_sampled(f, x, np.zeros(15), budget=200, seed=3)
        assert attr.n_coalitions <= 200
        assert attr.phi0 + sum(attr.phi) == pytest.approx(f.predict(x), abs=1e-9)

    def test_seeds(self):
        f = FunctionBlackBox(
            lambda z: 0.5 + 0.02 * z[:, 0] * z[:, 1] * z[:, 5] + 0.01 * np.cos(z).sum(axis=1),
            n_features=15,
        )
        x = np.linspace(-2, 2, 15)
        a = shapley_sampled(f, x, np.zeros(15), budget=100, seed=1)
        b = shapley_sampled(f, x, np.zeros(15), budget=100, seed=1)
        c = shapley_sampled(f, x, np.zeros(15), budget=100, seed=2)
        assert a.phi == b.phi
        assert a.phi != c.phi

    @pytest.mark.parametrize("budget", [30, 31])
    def test_every_coalition_in_budget_is_exact(self, budget):
        f = FunctionBlackBox(
            lambda z: z[:, 0] * z[:, 1] * z[:, 2] + z[:, 3] * z[:, 4], n_features=5, name="cubic"
        )
        x = np.array([1.0, 2.0, 1.5, -1.0, 0.5])
        sampled = shapley_sampled(f, x, np.zeros(5), budget=budget, seed=0)
        exact = shapley_exact(f, x, np.zeros(5))
        assert sampled.mode == ShapleyMode.SAMPLED
        assert sampled.n_coalitions == 30
        np.testing.assert_allclose(sampled.phi, exact.phi, rtol=0, atol=1e-9)
        assert sampled.phi0 == exact.phi0

    def test_full_enumeration_at_f8(self, forest, drug):
        f = FunctionBlackBox(
            lambda z: forest.predict_batch(np.hstack([z, np.zeros((z.shape[0], 2))])),
            n_features=8,
            name="forest8",
        )
        x = drug.features[3, :8]
        background = drug.features[:5, :8]
        sampled = shapley_sampled(f, x, background, budget=2**8 - 2, seed=1)
        exact = shapley_exact(f, x, background)
        assert sampled.n_coalitions == 2**8 - 2
        np.testing.assert_allclose(sampled.phi, exact.phi, rtol=0, atol=1e-9)

    @pytest.mark.parametrize("budget", [32, 40, 200, 1000])
    def test_coalitions_within_budget(self, budget):
        f = FunctionBlackBox(lambda z: 0.5 + 0.01 * np.tanh(z).sum(axis=1), n_features=15)
        attr = shapley_sampled(f, np.linspace(-1, 1, 15), np.zeros(15), budget=budget, seed=5)
        assert 30 <= attr.n_coalitions <= budget

    def test_small_budget_close_to_exact(self):
        f = FunctionBlackBox(
            lambda z: 0.5 + 0.1 * z[:, 0] * z[:, 1] - 0.05 * z[:, 2] + 0.02 * z[:, 3:].sum(axis=1),
            n_features=9,
        )
        x = np.linspace(-1, 1, 9)
        exact = shapley_exact(f, x, np.zeros(9))
        sampled = shapley_sampled(f, x, np.zeros(9), budget=400, seed=2)
        assert sampled.mode == ShapleyMode.SAMPLED
        np.testing.assert_allclose(sampled.phi, exact.phi, rtol=0, atol=0.025)
