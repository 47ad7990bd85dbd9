from collections.abc import Iterable, Sequence
from itertools import combinations

import numpy as np

from leaf.schema.explanation import LinearExplanation
from leaf.utils.error_handler import MetricError


def jaccard(a: Iterable[int], b: Iterable[int]) -> float:
    """|a ∩ b| / |a ∪ b|; two empty sets are identical (1.0)."""
    a, b = set(a), set(b)
    union = a | b
    if not union:
        return 1.0
    return len(a & b) / len(union)


def support(g: LinearExplanation) -> frozenset[int]:
    """Phi(g): indices with a non-zero weight."""
    return frozenset(index for index, weight in g.weights.items() if weight != 0.0)


def reiteration_similarity(explanations: Sequence[LinearExplanation]) -> float:
    """
    Mean Jaccard similarity of the supports over all unordered pairs.

    Raises:
        MetricError: fewer than two explanations
    """
    if len(explanations) < 2:
        raise MetricError(f"need at least 2 explanations, got {len(explanations)}")
    supports = [support(g) for g in explanations]
    return float(np.mean([jaccard(a, b) for a, b in combinations(supports, 2)]))
