"""
Black-box interface for the model zoo.

Every family subclasses `BlackBox` and implements `_predict`. Trained
models are immutable: predictions are pure and safe to call from many threads.
"""

from abc import ABC, abstractmethod
from collections.abc import Callable
from typing import Any, Self

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, Field, model_validator

from leaf.schema.models import ModelFamily
from leaf.utils.error_handler import DataError


class ModelSpec(BaseModel):
    """Family and hyperparameters of a model to train."""

    family: ModelFamily
    name: str | None = Field(default=None, description="Label in reports, defaults to the family")
    n_estimators: int = Field(default=50, ge=1, description="rf: number of trees")
    max_depth: int = Field(default=5, ge=1, description="rf: maximum tree depth")
    n_neighbors: int = Field(default=3, ge=1, description="kn: neighbors voting")
    hidden_layers: list[int] = Field(
        default_factory=lambda: [100], min_length=1, description="mlp: width of each layer"
    )
    epochs: int = Field(default=200, ge=1, description="mlp: training epochs")
    max_iter: int = Field(default=2000, ge=1, description="log: gradient-descent iterations")
    learning_rate: float = Field(default=0.01, gt=0, description="mlp: Adam step size")
    batch_size: int = Field(default=32, ge=1, description="mlp: mini-batch size")
    l2: float = Field(default=1.0, ge=0, description="log: L2 penalty, scaled by 1/n")
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_layers(self) -> Self:
        if any(width < 1 for width in self.hidden_layers):
            raise ValueError("hidden layer widths must be >= 1")
        return self

    @property
    def label(self) -> str:
        return self.name or str(self.family)

    def hyperparameters(self) -> dict[str, Any]:
        """Only the knobs that matter for this family."""
        per_family: dict[ModelFamily, tuple[str, ...]] = {
            ModelFamily.LIN: (),
            ModelFamily.LOG: ("max_iter", "l2"),
            ModelFamily.RF: ("n_estimators", "max_depth"),
            ModelFamily.KN: ("n_neighbors",),
            ModelFamily.MLP: ("hidden_layers", "epochs", "learning_rate", "batch_size"),
        }
        return {name: getattr(self, name) for name in per_family[self.family]}


class ModelDescriptor(BaseModel):
    """What a report says about a trained model."""

    family: ModelFamily
    name: str
    hyperparameters: dict[str, Any] = Field(default_factory=dict)
    seed: int
    training_accuracy: float = Field(ge=0, le=1)
    test_accuracy: float | None = Field(default=None, ge=0, le=1)
    warnings: list[str] = Field(
        default_factory=list, description="Training diagnostics such as non-convergence"
    )


class BlackBox(ABC):
    """
    A trained classifier seen only through f: R^F -> [0, 1].

    Attributes:
        spec: The specification it was trained from
        name: Label of the model in reports
        n_features: Input dimensionality F
        warnings: Diagnostics collected during training
    """

    def __init__(self, spec: ModelSpec, n_features: int):
        self.spec = spec
        self.n_features = n_features
        self.name = spec.label
        self.warnings: list[str] = []
        self.training_accuracy: float = 0.0

    @property
    def family(self) -> ModelFamily:
        return self.spec.family

    @abstractmethod
    def _predict(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        """Raw probabilities for a validated (n, F) matrix."""
        ...

    def predict_batch(self, points: ArrayLike) -> NDArray[np.float64]:
        """f(z) for every row of `points`, clipped to [0, 1]."""
        points = np.asarray(points, dtype=float)
        if points.ndim != 2 or points.shape[1] != self.n_features:
            raise DataError(
                f"expected points of shape (n, {self.n_features}), got {points.shape}"
            )
        if points.shape[0] == 0:
            return np.empty(0)
        return np.clip(self._predict(points), 0.0, 1.0)

    def predict(self, x: ArrayLike) -> float:
        """f(x) for a single instance."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n_features,):
            raise DataError(f"expected a vector of length {self.n_features}, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise DataError("instance must be finite")
        return float(self.predict_batch(x[None, :])[0])

    def __call__(self, x: ArrayLike) -> float:
        return self.predict(x)

    def descriptor(self, test_accuracy: float | None = None) -> ModelDescriptor:
        return ModelDescriptor(
            family=self.family,
            name=self.name,
            hyperparameters=self.spec.hyperparameters(),
            seed=self.spec.seed,
            training_accuracy=self.training_accuracy,
            test_accuracy=test_accuracy,
            warnings=list(self.warnings),
        )


class FunctionBlackBox(BlackBox):
    """
    Wraps a plain vectorized function as a black box.

    Useful for analytic models in experiments and tests; `fn` receives an
    (n, F) matrix and returns n values.
    """

    def __init__(
        self, fn: Callable[[NDArray], ArrayLike], n_features: int, name: str = "function"
    ):
        super().__init__(ModelSpec(family=ModelFamily.LIN), n_features)
        self._fn = fn
        self.name = name

    def _predict(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.asarray(self._fn(points), dtype=float).reshape(points.shape[0])
