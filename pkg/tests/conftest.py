import numpy as np
import pytest

from leaf.data import feature_stats, make_drug_like, make_separable
from leaf.models import FunctionBlackBox, LinearModel


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow", action="store_true", default=False, help="run acceptance-scale tests"
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: mark test as acceptance-scale (minutes)")


def pytest_collection_modifyitems(config, items):
    if not config.getoption("--run-slow"):
        skip_slow = pytest.mark.skip(reason="need --run-slow option to run")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)


@pytest.fixture(scope="session")
def separable():
    return make_separable(n_rows=500, margin=0.5, seed=0)


@pytest.fixture(scope="session")
def drug():
    return make_drug_like(n_rows=400, seed=0)


@pytest.fixture(scope="session")
def drug_stats(drug):
    return feature_stats(drug)


@pytest.fixture
def linear_box():
    """f(x) = 0.1 + 0.2 x_0 - 0.3 x_1 + 0.05 x_2, no clamping near the origin."""
    return LinearModel.from_coefficients(0.1, [0.2, -0.3, 0.05])


@pytest.fixture
def product_box():
    """f(x) = x_0 * x_1 on two features."""
    return FunctionBlackBox(lambda z: z[:, 0] * z[:, 1], n_features=2, name="product")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
