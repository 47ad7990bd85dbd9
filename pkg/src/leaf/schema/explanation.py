"""
Schemas for local linear explanations and Shapley attributions.
"""

from typing import Self

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, model_validator

from leaf.schema.models import ExplainerMethod, ShapleyMode


class NeighborhoodConfig(BaseModel):
    """
    How the synthetic neighborhood N(x) is drawn and weighted.

    `kernel_width` left as None resolves to (3/4)·sqrt(F) for the explained
    dataset.
    """

    model_config = ConfigDict(frozen=True)

    n_samples: int = Field(default=5000, ge=1, description="Neighborhood size H")
    kernel_width: float | None = Field(
        default=None, gt=0, description="Kernel width gamma; None = 0.75*sqrt(F)"
    )
    ridge_alpha: float = Field(default=1.0, ge=0, description="Ridge penalty alpha")
    seed: int = Field(default=0, ge=0, description="Sampling seed")

    def resolve_kernel_width(self, n_features: int) -> float:
        if self.kernel_width is not None:
            return self.kernel_width
        return default_kernel_width(n_features)


def default_kernel_width(n_features: int) -> float:
    return 0.75 * float(np.sqrt(n_features))


class ExplanationMeta(BaseModel):
    """Explainer-specific provenance attached to an explanation."""

    budget: int | None = Field(default=None, description="Coalition budget (shap)")
    mode: ShapleyMode | None = Field(default=None, description="exact or sampled (shap)")
    gamma: float | None = Field(default=None, description="Kernel width (lime)")
    H: int | None = Field(default=None, description="Neighborhood size (lime)")
    folded: list[int] = Field(
        default_factory=list,
        description="Kept features whose attribution was folded into the intercept (shap)",
    )


class LinearExplanation(BaseModel):
    """
    A local linear explanation g(z) = w_0 + sum_i w_i z_i.

    Only features in `selected` carry a (non-zero) weight; `selected` keeps
    the order in which the explainer ranked or picked them.
    """

    method: ExplainerMethod
    seed: int = Field(ge=0)
    K: int = Field(ge=1, description="Conciseness bound requested")
    n_features: int = Field(ge=1)
    intercept: float
    weights: dict[int, float] = Field(default_factory=dict)
    selected: list[int] = Field(default_factory=list)
    meta: ExplanationMeta = Field(default_factory=ExplanationMeta)

    @model_validator(mode="after")
    def check_support(self) -> Self:
        if len(set(self.selected)) != len(self.selected):
            raise ValueError("selected features must be distinct")
        if set(self.weights) != set(self.selected):
            raise ValueError("weights keys must equal the selected features")
        if self.K > self.n_features:
            raise ValueError(f"K={self.K} exceeds the number of features {self.n_features}")
        if len(self.selected) > self.K:
            raise ValueError(f"{len(self.selected)} selected features exceed K={self.K}")
        for index in self.selected:
            if not 0 <= index < self.n_features:
                raise ValueError(f"feature index {index} out of range")
        if not np.isfinite(self.intercept) or not all(
            np.isfinite(w) for w in self.weights.values()
        ):
            raise ValueError("intercept and weights must be finite")
        return self

    def weight_vector(self) -> NDArray[np.float64]:
        """Dense weight vector of length F (zeros outside the support)."""
        w = np.zeros(self.n_features)
        for index, weight in self.weights.items():
            w[index] = weight
        return w

    def evaluate(self, x: ArrayLike) -> float:
        """g(x) for a single point."""
        x = np.asarray(x, dtype=float)
        return float(self.intercept + sum(self.weights[i] * x[i] for i in self.selected))

    def evaluate_batch(self, points: ArrayLike) -> NDArray[np.float64]:
        """g(z) for every row of `points`."""
        points = np.asarray(points, dtype=float)
        if not self.selected:
            return np.full(points.shape[0], self.intercept)
        index = np.asarray(self.selected)
        w = np.asarray([self.weights[i] for i in self.selected])
        return self.intercept + points[:, index] @ w


class ShapleyAttribution(BaseModel):
    """
    Shapley values of one instance against a background set.

    phi0 is the model output with every feature taken from the background;
    phi[i] is the attribution of feature i.
    """

    phi0: float
    phi: list[float]
    background: list[list[float]] = Field(min_length=1)
    mode: ShapleyMode
    budget: int = Field(ge=1, description="Coalition budget granted")
    n_coalitions: int = Field(
        ge=0, description="Coalitions evaluated: all 2^F when exact, else those regressed on"
    )
    seed: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_shapes(self) -> Self:
        n_features = len(self.phi)
        if any(len(row) != n_features for row in self.background):
            raise ValueError("background rows must have one value per feature")
        if not all(np.isfinite(self.phi)) or not np.isfinite(self.phi0):
            raise ValueError("attributions must be finite")
        return self

    @property
    def n_features(self) -> int:
        return len(self.phi)

    def background_mean(self) -> NDArray[np.float64]:
        return np.asarray(self.background, dtype=float).mean(axis=0)
