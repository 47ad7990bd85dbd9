import numpy as np
import pytest

from leaf.data import Dataset, make_drug_like, make_separable, train_test_split
from leaf.models import (
    LinearModel,
    ModelSpec,
    NearestNeighborsModel,
    RandomForestModel,
    accuracy,
    model_registry,
    train,
)
from leaf.schema.models import ModelFamily
from leaf.utils.error_handler import ConfigError, DataError, TrainingError

SMALL_SPECS = {
    ModelFamily.LIN: ModelSpec(family=ModelFamily.LIN, seed=1),
    ModelFamily.LOG: ModelSpec(family=ModelFamily.LOG, seed=1, max_iter=300),
    ModelFamily.RF: ModelSpec(family=ModelFamily.RF, seed=1, n_estimators=8, max_depth=4),
    ModelFamily.KN: ModelSpec(family=ModelFamily.KN, seed=1),
    ModelFamily.MLP: ModelSpec(family=ModelFamily.MLP, seed=1, hidden_layers=[16], epochs=20),
}


@pytest.fixture(scope="module")
def small_drug():
    return make_drug_like(n_rows=200, seed=5)


@pytest.fixture(scope="module")
def zoo(small_drug):
    return {family: train(spec, small_drug) for family, spec in SMALL_SPECS.items()}


def test_logistic_on_separable(separable):
    model = train(ModelSpec(family=ModelFamily.LOG, seed=0), separable)
    assert model.training_accuracy >= 0.99
    holdout = make_separable(n_rows=300, margin=0.5, seed=99)
    assert accuracy(model, holdout) >= 0.99


@pytest.mark.parametrize("family", [ModelFamily.LIN, ModelFamily.LOG])
def test_constant_features_singular(family):
    d = Dataset(features=np.ones((10, 2)), labels=[0, 1] * 5, feature_names=("a", "b"))
    with pytest.raises(TrainingError, match="singular system"):
        train(ModelSpec(family=family), d)


def test_single_class_rejected():
    d = Dataset(features=np.arange(10.0)[:, None], labels=[1] * 10, feature_names=("a",))
    with pytest.raises(TrainingError, match="single class"):
        train(ModelSpec(family=ModelFamily.RF), d)


def test_constant_linear_model():
    model = LinearModel.from_coefficients(0.3, [0.0, 0.0])
    for x in ([0, 0], [10, -4], [1e6, 3]):
        assert model.predict(x) == pytest.approx(0.3, abs=1e-15)


def test_constant_model_accuracy_threshold():
    model = LinearModel.from_coefficients(0.3, [0.0])
    d = Dataset(features=[[1.0], [2.0], [3.0]], labels=[0, 0, 0], feature_names=("a",))
    assert accuracy(model, d) == 1.0


def test_accuracy_ties_classify_as_positive():
    model = LinearModel.from_coefficients(0.5, [0.0])
    d = Dataset(features=[[1.0], [2.0]], labels=[1, 0], feature_names=("a",))
    assert accuracy(model, d) == 0.5


def test_knn_vote_fraction():
    features = np.array([[0.0, 0.0], [0.1, 0.0], [0.0, 0.2], [5.0, 5.0], [6.0, 6.0]])
    d = Dataset(features=features, labels=[1, 1, 0, 0, 0], feature_names=("a", "b"))
    model = train(ModelSpec(family=ModelFamily.KN, n_neighbors=3), d)
    assert isinstance(model, NearestNeighborsModel)
    assert model.predict([0.0, 0.0]) == pytest.approx(2 / 3)


def test_knn_more_neighbors_than_rows():
    d = Dataset(features=[[0.0], [1.0]], labels=[0, 1], feature_names=("a",))
    model = train(ModelSpec(family=ModelFamily.KN, n_neighbors=5), d)
    assert model.predict([0.2]) == 0.5
    assert model.warnings


def test_predict_wrong_dimension(zoo):
    with pytest.raises(DataError, match="length 10"):
        zoo[ModelFamily.LIN].predict([1.0, 2.0])
    with pytest.raises(DataError, match="shape"):
        zoo[ModelFamily.LIN].predict_batch(np.zeros((3, 4)))


@pytest.mark.parametrize("family", list(ModelFamily))
def test_probability_range(zoo, family):
    probes = np.random.default_rng(0).normal(scale=5.0, size=(10_000, 10))
    values = zoo[family].predict_batch(probes)
    assert values.shape == (10_000,)
    assert np.all((values >= 0) & (values <= 1))


@pytest.mark.parametrize("family", list(ModelFamily))
def test_training_is_deterministic(small_drug, zoo, family):
    again = train(SMALL_SPECS[family], small_drug)
    probes = np.random.default_rng(1).normal(size=(200, 10))
    assert np.array_equal(again.predict_batch(probes), zoo[family].predict_batch(probes))


@pytest.mark.parametrize("family", list(ModelFamily))
def test_predict_is_pure(zoo, family):
    x = np.linspace(-1, 1, 10)
    assert zoo[family].predict(x) == zoo[family].predict(x)


def test_forest_is_mean_of_trees(zoo):
    forest = zoo[ModelFamily.RF]
    assert isinstance(forest, RandomForestModel)
    probes = np.random.default_rng(2).normal(size=(50, 10))
    for x in probes:
        per_tree = []
        for tree in forest.trees:
            node = 0
            while tree.feature[node] >= 0:
                go_left = x[tree.feature[node]] <= tree.threshold[node]
                node = tree.left[node] if go_left else tree.right[node]
            per_tree.append(tree.value[node])
        assert forest.predict(x) == pytest.approx(np.mean(per_tree), abs=1e-12)


def test_forest_respects_depth(zoo):
    for tree in zoo[ModelFamily.RF].trees:
        assert tree.depth == 4
        leaves = tree.leaf_index(np.random.default_rng(0).normal(size=(100, 10)))
        assert np.all(tree.feature[leaves] < 0)


def test_rf_beats_lin_on_interactions():
    d = make_drug_like(n_rows=1000, seed=3)
    train_part, test_part = train_test_split(d, 0.2, seed=3)
    rf = train(ModelSpec(family=ModelFamily.RF, seed=3), train_part)
    lin = train(ModelSpec(family=ModelFamily.LIN, seed=3), train_part)
    assert accuracy(rf, test_part) >= accuracy(lin, test_part)


def test_mlp_multi_layer(small_drug):
    spec = ModelSpec(family=ModelFamily.MLP, hidden_layers=[8, 4], epochs=5, seed=0)
    model = train(spec, small_drug)
    assert [w.shape for w in model.weights] == [(10, 8), (8, 4), (4, 1)]
    assert len(model.loss_history) == 5


def test_descriptor(zoo):
    descriptor = zoo[ModelFamily.RF].descriptor(test_accuracy=0.8)
    assert descriptor.family == ModelFamily.RF
    assert descriptor.hyperparameters == {"n_estimators": 8, "max_depth": 4}
    assert descriptor.seed == 1
    assert descriptor.test_accuracy == 0.8


class TestModelSpec:
    """Hyperparameter validation."""

    @pytest.mark.parametrize(
        "field", ["n_estimators", "max_depth", "n_neighbors", "epochs", "batch_size"]
    )
    def test_non_positive_rejected(self, field):
        with pytest.raises(ValueError):
            ModelSpec(family=ModelFamily.RF, **{field: 0})

    def test_zero_width_layer_rejected(self):
        with pytest.raises(ValueError, match="hidden layer"):
            ModelSpec(family=ModelFamily.MLP, hidden_layers=[10, 0])

    def test_defaults(self):
        spec = ModelSpec(family="rf")
        assert (spec.n_estimators, spec.max_depth) == (50, 5)
        assert spec.n_neighbors == 3
        assert spec.hidden_layers == [100]


class TestModelRegistry:
    """Family registry."""

    def test_all_families_registered(self):
        families = {m["family"] for m in model_registry.list_families()}
        assert families == set(ModelFamily)

    def test_unknown_family(self):
        with pytest.raises(ConfigError, match="unknown model family"):
            model_registry.get("svc")
