import pytest

from leaf.harness import build_config, prepare, run_p2

SMALL = {
    "dataset.synthetic": "drug_like",
    "dataset.rows": "200",
    "model.families": "lin",
    "explain.k": "4",
    "explain.samples": "300",
    "instances.count": "2",
    "metrics.repetitions": "3",
    "run.seed": "7",
    "run.workers": "1",
}


def small_config(**overrides):
    """SMALL with overrides; `explain__k="2"` sets `explain.k`."""
    values = dict(SMALL)
    values.update({key.replace("__", "."): value for key, value in overrides.items()})
    return build_config(values)


@pytest.fixture(scope="session")
def make_config():
    return small_config


@pytest.fixture(scope="session")
def small_cfg():
    return small_config()


@pytest.fixture(scope="session")
def small_workspace(small_cfg):
    return prepare(small_cfg)


@pytest.fixture(scope="session")
def sweep_report(small_cfg, small_workspace):
    return run_p2(small_cfg, small_workspace)
