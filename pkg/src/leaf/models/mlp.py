"""
Multi-layer perceptron (mlp): ReLU hidden layers, sigmoid output.

Trained on binary cross-entropy with mini-batch Adam on internally
standardized features.
"""

import logging

import numpy as np
from numpy.typing import NDArray
from scipy.special import expit

from leaf.data.dataset import Dataset
from leaf.models.base import BlackBox, ModelSpec
from leaf.utils.error_handler import TrainingError

logger = logging.getLogger(__name__)

ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8
# relative loss change over this many trailing epochs must stay below CONVERGENCE_TOL
CONVERGENCE_WINDOW = 10
CONVERGENCE_TOL = 1e-2


def _log_loss(p: NDArray[np.float64], y: NDArray[np.float64]) -> float:
    p = np.clip(p, 1e-12, 1 - 1e-12)
    return float(-np.mean(y * np.log(p) + (1 - y) * np.log(1 - p)))


class MLPModel(BlackBox):
    def __init__(
        self,
        spec: ModelSpec,
        weights: list[NDArray[np.float64]],
        biases: list[NDArray[np.float64]],
        center: NDArray[np.float64],
        scale: NDArray[np.float64],
    ):
        super().__init__(spec, n_features=weights[0].shape[0])
        self.weights = [w.copy() for w in weights]
        self.biases = [b.copy() for b in biases]
        self.center = center
        self.scale = scale
        self.loss_history: list[float] = []

    def _forward(self, z: NDArray[np.float64]) -> list[NDArray[np.float64]]:
        """Activations of every layer; the last entry is the sigmoid output."""
        activations = [z]
        for w, b in zip(self.weights[:-1], self.biases[:-1]):
            activations.append(np.maximum(activations[-1] @ w + b, 0.0))
        logits = activations[-1] @ self.weights[-1] + self.biases[-1]
        activations.append(expit(logits[:, 0]))
        return activations

    def _predict(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return self._forward((points - self.center) / self.scale)[-1]

    @classmethod
    def fit(cls, spec: ModelSpec, d: Dataset) -> "MLPModel":
        rng = np.random.default_rng(spec.seed)
        center = d.features.mean(axis=0)
        scale = d.features.std(axis=0)
        scale = np.where(scale > 0, scale, 1.0)
        z = (d.features - center) / scale
        y = d.labels.astype(float)

        widths = [d.n_features, *spec.hidden_layers, 1]
        weights = [
            rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, fan_out))
            for fan_in, fan_out in zip(widths[:-1], widths[1:])
        ]
        biases = [np.zeros(fan_out) for fan_out in widths[1:]]
        model = cls(spec, weights, biases, center, scale)
        model._train(z, y, rng)
        return model

    def _train(self, z: NDArray[np.float64], y: NDArray[np.float64], rng: np.random.Generator):
        spec = self.spec
        params = [*self.weights, *self.biases]
        first = [np.zeros_like(p) for p in params]
        second = [np.zeros_like(p) for p in params]
        beta1, beta2 = ADAM_BETAS
        step = 0
        n_layers = len(self.weights)

        for epoch in range(spec.epochs):
            order = rng.permutation(z.shape[0])
            for start in range(0, z.shape[0], spec.batch_size):
                batch = order[start : start + spec.batch_size]
                activations = self._forward(z[batch])

                # d(mean BCE)/d(logit) = p - y
                delta = ((activations[-1] - y[batch]) / batch.shape[0])[:, None]
                grad_w: list[NDArray[np.float64]] = [np.empty(0)] * n_layers
                grad_b: list[NDArray[np.float64]] = [np.empty(0)] * n_layers
                for layer in range(n_layers - 1, -1, -1):
                    grad_w[layer] = activations[layer].T @ delta
                    grad_b[layer] = delta.sum(axis=0)
                    if layer > 0:
                        delta = (delta @ self.weights[layer].T) * (activations[layer] > 0)

                step += 1
                for i, grad in enumerate([*grad_w, *grad_b]):
                    first[i] = beta1 * first[i] + (1 - beta1) * grad
                    second[i] = beta2 * second[i] + (1 - beta2) * grad**2
                    m_hat = first[i] / (1 - beta1**step)
                    v_hat = second[i] / (1 - beta2**step)
                    params[i] -= spec.learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS)

            loss = _log_loss(self._forward(z)[-1], y)
            if not np.isfinite(loss):
                raise TrainingError(f"mlp: loss diverged at epoch {epoch}")
            self.loss_history.append(loss)

        self._check_convergence()

    def _check_convergence(self) -> None:
        history = self.loss_history
        if len(history) <= CONVERGENCE_WINDOW:
            return
        before, last = history[-CONVERGENCE_WINDOW - 1], history[-1]
        change = abs(before - last) / max(before, 1e-12)
        if change > CONVERGENCE_TOL:
            message = (
                f"mlp: loss still moving after {self.spec.epochs} epochs "
                f"({change:.1%} over the last {CONVERGENCE_WINDOW})"
            )
            logger.warning(message)
            self.warnings.append(message)
