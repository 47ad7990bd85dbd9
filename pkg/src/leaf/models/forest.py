"""
Random forest (rf): bagged CART trees grown with the Gini criterion.

Each tree is stored as flat arrays (node -> feature, threshold, children,
leaf value) and evaluated for a whole batch at once, one depth level per
step. The forest probability is the mean of the trees' leaf class-1
fractions.
"""

import logging
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from leaf.data.dataset import Dataset
from leaf.models.base import BlackBox, ModelSpec

logger = logging.getLogger(__name__)

LEAF = -1


@dataclass(frozen=True)
class Tree:
    """
    A fitted decision tree.

    `feature[node] == LEAF` marks a leaf; points with
    x[feature] <= threshold go to `left`.
    """

    feature: NDArray[np.int64]
    threshold: NDArray[np.float64]
    left: NDArray[np.int64]
    right: NDArray[np.int64]
    value: NDArray[np.float64]
    depth: int

    @property
    def n_nodes(self) -> int:
        return int(self.feature.shape[0])

    def leaf_index(self, points: NDArray[np.float64]) -> NDArray[np.int64]:
        node = np.zeros(points.shape[0], dtype=np.int64)
        rows = np.arange(points.shape[0])
        for _ in range(self.depth):
            feature = self.feature[node]
            internal = feature != LEAF
            if not internal.any():
                break
            goes_left = points[rows, np.where(internal, feature, 0)] <= self.threshold[node]
            child = np.where(goes_left, self.left[node], self.right[node])
            node = np.where(internal, child, node)
        return node

    def predict(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.value[self.leaf_index(points)]


def _gini_split(
    column: NDArray[np.float64], labels: NDArray[np.float64]
) -> tuple[float, float] | None:
    """Best (weighted impurity, threshold) on one feature, None if the column is constant."""
    order = np.argsort(column, kind="stable")
    xs = column[order]
    ys = labels[order]
    n = xs.shape[0]

    left_n = np.arange(1, n, dtype=float)
    right_n = n - left_n
    left_pos = np.cumsum(ys)[:-1]
    right_pos = ys.sum() - left_pos

    p_left = left_pos / left_n
    p_right = right_pos / right_n
    impurity = left_n * 2 * p_left * (1 - p_left) + right_n * 2 * p_right * (1 - p_right)
    impurity[xs[1:] <= xs[:-1]] = np.inf
    position = int(np.argmin(impurity))
    if not np.isfinite(impurity[position]):
        return None

    threshold = (xs[position] + xs[position + 1]) / 2
    if threshold >= xs[position + 1]:
        threshold = xs[position]
    return float(impurity[position]), float(threshold)


class _TreeBuilder:
    def __init__(self, max_depth: int, max_features: int, rng: np.random.Generator):
        self.max_depth = max_depth
        self.max_features = max_features
        self.rng = rng
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.value: list[float] = []

    def _new_node(self, value: float) -> int:
        self.feature.append(LEAF)
        self.threshold.append(0.0)
        self.left.append(LEAF)
        self.right.append(LEAF)
        self.value.append(value)
        return len(self.feature) - 1

    def _best_split(
        self, x: NDArray[np.float64], y: NDArray[np.float64]
    ) -> tuple[int, float] | None:
        n = y.shape[0]
        p = y.mean()
        parent = n * 2 * p * (1 - p)
        best: tuple[float, int, float] | None = None
        # keep drawing past max_features only while no valid split has been found
        for tried, feature in enumerate(self.rng.permutation(x.shape[1])):
            if tried >= self.max_features and best is not None:
                break
            found = _gini_split(x[:, feature], y)
            if found is None:
                continue
            impurity, threshold = found
            if impurity < parent - 1e-12 and (best is None or impurity < best[0]):
                best = (impurity, int(feature), threshold)
        if best is None:
            return None
        return best[1], best[2]

    def grow(self, x: NDArray[np.float64], y: NDArray[np.float64], depth: int) -> int:
        node = self._new_node(float(y.mean()))
        if depth >= self.max_depth or y.shape[0] < 2 or y.min() == y.max():
            return node
        split = self._best_split(x, y)
        if split is None:
            return node
        feature, threshold = split
        mask = x[:, feature] <= threshold
        self.feature[node] = feature
        self.threshold[node] = threshold
        self.left[node] = self.grow(x[mask], y[mask], depth + 1)
        self.right[node] = self.grow(x[~mask], y[~mask], depth + 1)
        return node

    def build(self, x: NDArray[np.float64], y: NDArray[np.float64]) -> Tree:
        self.grow(x, y, depth=0)
        return Tree(
            feature=np.asarray(self.feature, dtype=np.int64),
            threshold=np.asarray(self.threshold, dtype=float),
            left=np.asarray(self.left, dtype=np.int64),
            right=np.asarray(self.right, dtype=np.int64),
            value=np.asarray(self.value, dtype=float),
            depth=self.max_depth,
        )


class RandomForestModel(BlackBox):
    """
    Bagged Gini trees; each split considers sqrt(F) random features.
    """

    def __init__(self, spec: ModelSpec, n_features: int, trees: list[Tree]):
        super().__init__(spec, n_features)
        self.trees = tuple(trees)

    @classmethod
    def fit(cls, spec: ModelSpec, d: Dataset) -> "RandomForestModel":
        max_features = max(1, int(np.sqrt(d.n_features)))
        y = d.labels.astype(float)
        trees = []
        for child in np.random.SeedSequence(spec.seed).spawn(spec.n_estimators):
            rng = np.random.default_rng(child)
            sample = rng.integers(0, d.n_rows, size=d.n_rows)
            builder = _TreeBuilder(spec.max_depth, max_features, rng)
            trees.append(builder.build(d.features[sample], y[sample]))
        logger.debug(
            f"rf: grew {len(trees)} trees, {sum(t.n_nodes for t in trees)} nodes in total"
        )
        return cls(spec, d.n_features, trees)

    def tree_probabilities(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        """(n_trees, n) matrix of per-tree leaf class-1 fractions."""
        return np.vstack([tree.predict(points) for tree in self.trees])

    def _predict(self, points: NDArray[np.float64]) -> NDArray[np.float64]:
        return self.tree_probabilities(points).mean(axis=0)
