"""
Brute-force Shapley reference: literal enumeration of every coalition
S ⊆ F \\ {i}, factorial weights as exact fractions, one black-box call per
point.
"""

import itertools
import math
from fractions import Fraction

import numpy as np
from numpy.typing import ArrayLike, NDArray

from leaf.models.base import BlackBox
from leaf.utils.error_handler import OracleError

BRUTEFORCE_MAX_FEATURES = 12


def shapley_bruteforce(f: BlackBox, x: ArrayLike, background: ArrayLike) -> NDArray[np.float64]:
    """
    phi_i = sum over S of |S|!(F-|S|-1)!/F! · (v(S ∪ {i}) - v(S)).

    Raises:
        OracleError: F above the cap or background of the wrong width
    """
    x = [float(value) for value in np.asarray(x, dtype=float)]
    n_features = len(x)
    if n_features > BRUTEFORCE_MAX_FEATURES:
        raise OracleError(
            f"brute force is capped at {BRUTEFORCE_MAX_FEATURES} features, got {n_features}"
        )
    rows = np.atleast_2d(np.asarray(background, dtype=float))
    if rows.shape[1] != n_features:
        raise OracleError(f"background rows must have {n_features} values")
    rows_as_lists = [[float(value) for value in row] for row in rows]

    cache: dict[frozenset[int], float] = {}

    def value(coalition: frozenset[int]) -> float:
        if coalition not in cache:
            outputs = []
            for row in rows_as_lists:
                point = [x[j] if j in coalition else row[j] for j in range(n_features)]
                outputs.append(f.predict(point))
            cache[coalition] = math.fsum(outputs) / len(outputs)
        return cache[coalition]

    total = math.factorial(n_features)
    phi = []
    for i in range(n_features):
        others = [j for j in range(n_features) if j != i]
        terms = []
        # largest coalitions first
        for size in range(n_features - 1, -1, -1):
            weight = Fraction(math.factorial(size) * math.factorial(n_features - size - 1), total)
            for members in itertools.combinations(reversed(others), size):
                coalition = frozenset(members)
                marginal = value(coalition | {i}) - value(coalition)
                terms.append(float(weight * Fraction(marginal)))
        phi.append(math.fsum(terms))
    return np.asarray(phi)
