import logging

import numpy as np
from numpy.typing import NDArray
from scipy.spatial.distance import cdist

from leaf.core.settings import settings
from leaf.data.dataset import Dataset
from leaf.models.base import BlackBox, ModelSpec

logger = logging.getLogger(__name__)


class NearestNeighborsModel(BlackBox):
    """
    k-nearest-neighbor vote fraction (kn).

    Distance ties are broken by training-row order, so predictions are
    reproducible.
    """

    def __init__(self, spec: ModelSpec, features: NDArray[np.float64], labels: NDArray[np.int64]):
        super().__init__(spec, n_features=features.shape[1])
        self.features = features
        self.labels = labels.astype(float)
        self.k = min(spec.n_neighbors, features.shape[0])

    @classmethod
    def fit(cls, spec: ModelSpec, d: Dataset) -> "NearestNeighborsModel":
        model = cls(spec, d.features, d.labels)
        if model.k < spec.n_neighbors:
            message = f"kn: only {d.n_rows} training rows, using k={model.k}"
            logger.warning(message)
            model.warnings.append(message)
        return model

    def _predict(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        chunk = settings.PREDICT_CHUNK_ROWS
        out = np.empty(points.shape[0])
        for start in range(0, points.shape[0], chunk):
            block = points[start : start + chunk]
            distances = cdist(block, self.features, metric="sqeuclidean")
            nearest = np.argsort(distances, axis=1, kind="stable")[:, : self.k]
            out[start : start + chunk] = self.labels[nearest].mean(axis=1)
        return out
