"""
Everything a run shares read-only across its tasks: the dataset and its
seeded split, feature statistics, the Shapley background and the trained
black boxes.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from leaf.data.dataset import Dataset, FeatureStats, feature_stats, load_csv, train_test_split
from leaf.data.synthetic import make_synthetic
from leaf.explainers.registry import ExplainContext
from leaf.harness.config import DatasetSection, RunConfig
from leaf.models.base import BlackBox, ModelDescriptor
from leaf.models.registry import accuracy, train
from leaf.utils.error_handler import ConfigError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Workspace:
    config: RunConfig
    dataset: Dataset
    train: Dataset
    test: Dataset
    stats: FeatureStats
    background: NDArray[np.float64]
    models: tuple[BlackBox, ...]
    descriptors: tuple[ModelDescriptor, ...]

    @property
    def n_features(self) -> int:
        return self.dataset.n_features

    def context(self) -> ExplainContext:
        return ExplainContext(
            stats=self.stats,
            background=self.background,
            neighborhood=self.config.explain.neighborhood(),
            shap_budget=self.config.explain.budget,
        )

    def instance_rows(self) -> list[int]:
        """
        Test-split rows to explain: explicit indices, else the first N rows.

        Raises:
            ConfigError: an index is outside the test split
        """
        selector = self.config.instances
        n_test = self.test.n_rows
        if selector.indices is not None:
            outside = [index for index in selector.indices if index >= n_test]
            if outside:
                raise ConfigError(
                    f"instance index {outside[0]} outside the test split ({n_test} rows)"
                )
            return list(selector.indices)
        if selector.count > n_test:
            logger.warning(f"only {n_test} test rows, explaining all of them")
        return list(range(min(selector.count, n_test)))


def load_dataset(section: DatasetSection, seed: int) -> Dataset:
    if section.path is not None:
        return load_csv(section.path)
    assert section.synthetic is not None
    return make_synthetic(section.synthetic, section.rows, seed)


def _background(cfg: RunConfig, train_split: Dataset, stats: FeatureStats) -> NDArray[np.float64]:
    rows = cfg.explain.background_rows
    if rows is None:
        return stats.mean[None, :].copy()
    if rows > train_split.n_rows:
        raise ConfigError(
            f"explain.background_rows={rows} exceeds the {train_split.n_rows} training rows"
        )
    return np.array(train_split.features[:rows])


def prepare(cfg: RunConfig) -> Workspace:
    """
    Load and split the data, then train every configured model family.

    The split, the synthetic data and the models all use `cfg.run.seed`, so
    a workspace is fully determined by the configuration.

    Raises:
        ConfigError: K larger than the number of features (checked before training)
    """
    seed = cfg.run.seed
    dataset = load_dataset(cfg.dataset, seed)
    cfg.check_against(dataset.n_features)
    train_split, test_split = train_test_split(dataset, cfg.dataset.test_fraction, seed)
    stats = feature_stats(train_split)
    logger.info(
        f"dataset {dataset.name}: {dataset.n_rows} rows, {dataset.n_features} features, "
        f"{train_split.n_rows}/{test_split.n_rows} train/test"
    )

    models = []
    descriptors = []
    for spec in cfg.model.specs(seed):
        model = train(spec, train_split)
        descriptor = model.descriptor(test_accuracy=accuracy(model, test_split))
        logger.info(f"{spec.label}: test accuracy {descriptor.test_accuracy:.3f}")
        models.append(model)
        descriptors.append(descriptor)

    return Workspace(
        config=cfg,
        dataset=dataset,
        train=train_split,
        test=test_split,
        stats=stats,
        background=_background(cfg, train_split, stats),
        models=tuple(models),
        descriptors=tuple(descriptors),
    )
