"""
Linear families: least-squares regressor (lin) and logistic regression (log).
"""

import logging

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg
from scipy.special import expit

from leaf.data.dataset import Dataset
from leaf.models.base import BlackBox, ModelSpec
from leaf.schema.models import ModelFamily
from leaf.utils.error_handler import TrainingError

logger = logging.getLogger(__name__)


def _design(features: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.column_stack([np.ones(features.shape[0]), features])


def _check_rank(features: NDArray[np.float64], family: ModelFamily) -> None:
    design = _design(features)
    rank = np.linalg.matrix_rank(design)
    if rank < design.shape[1]:
        raise TrainingError(
            f"{family}: singular system (design rank {rank} < {design.shape[1]}); "
            "constant or collinear features"
        )


class LinearModel(BlackBox):
    """
    Least-squares regressor on the 0/1 labels, output clamped to [0, 1].
    """

    def __init__(self, spec: ModelSpec, intercept: float, coefficients: ArrayLike):
        coefficients = np.asarray(coefficients, dtype=float)
        super().__init__(spec, n_features=coefficients.shape[0])
        self.intercept = float(intercept)
        self.coefficients = coefficients
        self.coefficients.setflags(write=False)

    @classmethod
    def fit(cls, spec: ModelSpec, d: Dataset) -> "LinearModel":
        _check_rank(d.features, ModelFamily.LIN)
        solution, *_ = linalg.lstsq(_design(d.features), d.labels.astype(float))
        return cls(spec, intercept=solution[0], coefficients=solution[1:])

    @classmethod
    def from_coefficients(
        cls, intercept: float, coefficients: ArrayLike, seed: int = 0
    ) -> "LinearModel":
        """A linear black box with known weights (no training)."""
        return cls(ModelSpec(family=ModelFamily.LIN, seed=seed), intercept, coefficients)

    def _predict(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.intercept + points @ self.coefficients


class LogisticModel(BlackBox):
    """
    Logistic regression trained by full-batch gradient descent.

    Features are standardized internally with the training statistics; the
    loss is the mean log-loss plus (l2 / 2n)·||w||² (intercept unpenalized).
    The step is 1/L with L the Lipschitz constant of the gradient.
    """

    tolerance = 1e-6

    def __init__(
        self,
        spec: ModelSpec,
        intercept: float,
        coefficients: ArrayLike,
        center: ArrayLike,
        scale: ArrayLike,
    ):
        coefficients = np.asarray(coefficients, dtype=float)
        super().__init__(spec, n_features=coefficients.shape[0])
        self.intercept = float(intercept)
        self.coefficients = coefficients
        self.center = np.asarray(center, dtype=float)
        self.scale = np.asarray(scale, dtype=float)
        for array in (self.coefficients, self.center, self.scale):
            array.setflags(write=False)

    @classmethod
    def fit(cls, spec: ModelSpec, d: Dataset) -> "LogisticModel":
        _check_rank(d.features, ModelFamily.LOG)
        center = d.features.mean(axis=0)
        scale = d.features.std(axis=0)
        z = (d.features - center) / scale
        y = d.labels.astype(float)
        n, n_features = z.shape

        design = _design(z)
        penalty = np.full(n_features + 1, spec.l2 / n)
        penalty[0] = 0.0
        lipschitz = 0.25 * np.linalg.eigvalsh(design.T @ design / n).max() + penalty.max()
        step = 1.0 / lipschitz

        theta = np.zeros(n_features + 1)
        converged = False
        for iteration in range(spec.max_iter):
            gradient = design.T @ (expit(design @ theta) - y) / n + penalty * theta
            if np.max(np.abs(gradient)) < cls.tolerance:
                converged = True
                break
            theta -= step * gradient

        model = cls(spec, theta[0], theta[1:], center, scale)
        if not converged:
            message = (
                f"log: gradient descent did not converge in {spec.max_iter} iterations "
                f"(|grad|={np.max(np.abs(gradient)):.2e})"
            )
            logger.warning(message)
            model.warnings.append(message)
        else:
            logger.debug(f"log: converged after {iteration} iterations")
        return model

    def _predict(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        z = (points - self.center) / self.scale
        return expit(self.intercept + z @ self.coefficients)
