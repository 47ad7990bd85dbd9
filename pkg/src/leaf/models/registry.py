"""
Model zoo registry.

Every family registers a trainer (a `fit(spec, dataset)` callable). `train`
looks the family up, checks the dataset and records the training accuracy.
"""

import logging
from collections.abc import Callable
from typing import Any

import numpy as np

from leaf.data.dataset import Dataset
from leaf.models.base import BlackBox, ModelSpec
from leaf.models.forest import RandomForestModel
from leaf.models.linear import LinearModel, LogisticModel
from leaf.models.mlp import MLPModel
from leaf.models.neighbors import NearestNeighborsModel
from leaf.schema.models import ModelFamily
from leaf.utils.error_handler import ConfigError, TrainingError

logger = logging.getLogger(__name__)

Trainer = Callable[[ModelSpec, Dataset], BlackBox]


class ModelRegistry:
    """
    Central registry of model families.

    Families can be disabled (e.g. to keep a slow family out of a sweep)
    without unregistering them.
    """

    def __init__(self):
        self._trainers: dict[ModelFamily, Trainer] = {}
        self._metadata: dict[ModelFamily, dict[str, Any]] = {}

    def register(
        self,
        family: ModelFamily,
        trainer: Trainer,
        description: str,
        enabled: bool = True,
    ) -> None:
        self._trainers[family] = trainer
        self._metadata[family] = {
            "family": family,
            "description": description,
            "enabled": enabled,
        }

    def get(self, family: ModelFamily | str) -> Trainer:
        """
        Trainer of a family.

        Raises:
            ConfigError: If the family is unknown or disabled
        """
        try:
            family = ModelFamily(family)
        except ValueError:
            raise ConfigError(f"unknown model family '{family}'") from None
        if family not in self._trainers:
            raise ConfigError(f"model family '{family}' is not registered")
        if not self._metadata[family]["enabled"]:
            raise ConfigError(f"model family '{family}' is disabled")
        return self._trainers[family]

    def list_families(self, include_disabled: bool = False) -> list[dict[str, Any]]:
        return [
            metadata
            for metadata in self._metadata.values()
            if include_disabled or metadata["enabled"]
        ]


model_registry = ModelRegistry()
model_registry.register(
    ModelFamily.LIN, LinearModel.fit, "least-squares linear regressor clamped to [0, 1]"
)
model_registry.register(
    ModelFamily.LOG, LogisticModel.fit, "logistic regression by gradient descent"
)
model_registry.register(
    ModelFamily.RF, RandomForestModel.fit, "bagged Gini CART trees, probability averaging"
)
model_registry.register(
    ModelFamily.KN, NearestNeighborsModel.fit, "k-nearest-neighbor vote fraction"
)
model_registry.register(
    ModelFamily.MLP, MLPModel.fit, "ReLU network with sigmoid output, mini-batch Adam"
)


def accuracy(m: BlackBox, d: Dataset) -> float:
    """Fraction of rows where (f(x) >= 0.5) equals the label."""
    predicted = (m.predict_batch(d.features) >= 0.5).astype(np.int64)
    return float(np.mean(predicted == d.labels))


def train(spec: ModelSpec, d: Dataset) -> BlackBox:
    """
    Train a black box of `spec.family` on `d`.

    Raises:
        TrainingError: If `d` holds a single class or the family's solver fails
        ConfigError: If the family is unknown or disabled
    """
    if not d.has_both_classes():
        raise TrainingError(f"{spec.family}: training data holds a single class")
    trainer = model_registry.get(spec.family)
    logger.info(
        f"Training {spec.family} on {d.n_rows} rows x {d.n_features} features (seed {spec.seed})"
    )
    model = trainer(spec, d)
    model.training_accuracy = accuracy(model, d)
    logger.info(f"{spec.label}: training accuracy {model.training_accuracy:.3f}")
    return model
