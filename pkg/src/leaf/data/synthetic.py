"""
Seeded synthetic datasets for desk-scale experiments.

`drug_like` and `heartrisk_like` mimic the shape of the drug-consumption
(F=10) and heart-risk (F=15) tabular sets: the first has strong feature
interactions that a linear model cannot capture, the second is mostly
additive with a few threshold effects.
"""

from collections.abc import Callable

import numpy as np
from scipy.special import expit

from leaf.data.dataset import Dataset
from leaf.utils.error_handler import DataError

DRUG_FEATURES = (
    "age",
    "gender",
    "education",
    "neuroticism",
    "extraversion",
    "openness",
    "agreeableness",
    "conscientiousness",
    "impulsiveness",
    "sensation",
)

HEARTRISK_FEATURES = (
    "age",
    "sex",
    "cholesterol",
    "hdl",
    "systolic_bp",
    "diastolic_bp",
    "bmi",
    "glucose",
    "smoker",
    "diabetes",
    "family_history",
    "activity",
    "alcohol",
    "sleep_hours",
    "stress",
)


def _check_rows(n_rows: int) -> None:
    if n_rows < 2:
        raise DataError(f"need at least 2 rows, got {n_rows}")


def make_separable(n_rows: int = 500, margin: float = 0.5, seed: int = 0) -> Dataset:
    """
    Two features, y = 1 iff x_1 + x_2 > 0, with every row at least
    `margin` away from the boundary (measured on x_1 + x_2).
    """
    _check_rows(n_rows)
    rng = np.random.default_rng(seed)
    x = rng.uniform(-2.0, 2.0, size=(n_rows, 2))
    side = np.where(x.sum(axis=1) >= 0, 1.0, -1.0)
    # shifting both coordinates by margin/2 moves the sum by margin
    x += (side * margin / 2)[:, None]
    labels = (x.sum(axis=1) > 0).astype(np.int64)
    return Dataset(features=x, labels=labels, feature_names=("x1", "x2"), name="separable")


def make_drug_like(n_rows: int = 1000, seed: int = 0) -> Dataset:
    """F=10 standardized scores; the label depends on pairwise interactions."""
    _check_rows(n_rows)
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n_rows, len(DRUG_FEATURES)))
    x[:, 1] = rng.integers(0, 2, size=n_rows)  # gender
    logit = (
        1.6 * x[:, 8] * x[:, 9]
        - 1.2 * x[:, 0] * x[:, 5]
        + 1.1 * np.sin(2.0 * x[:, 3])
        + 0.9 * (x[:, 7] ** 2 - 1.0)
        + 0.6 * x[:, 9]
        - 0.4 * x[:, 1]
    )
    labels = (rng.uniform(size=n_rows) < expit(2.0 * logit)).astype(np.int64)
    return Dataset(features=x, labels=labels, feature_names=DRUG_FEATURES, name="drug_like")


def make_heartrisk_like(n_rows: int = 1000, seed: int = 0) -> Dataset:
    """F=15 clinical-style measurements in raw units; mostly additive risk."""
    _check_rows(n_rows)
    rng = np.random.default_rng(seed)
    columns = {
        "age": rng.uniform(30, 80, n_rows),
        "sex": rng.integers(0, 2, n_rows).astype(float),
        "cholesterol": rng.normal(200, 35, n_rows),
        "hdl": rng.normal(50, 12, n_rows),
        "systolic_bp": rng.normal(130, 18, n_rows),
        "diastolic_bp": rng.normal(82, 10, n_rows),
        "bmi": rng.normal(27, 4.5, n_rows),
        "glucose": rng.normal(100, 20, n_rows),
        "smoker": rng.integers(0, 2, n_rows).astype(float),
        "diabetes": (rng.uniform(size=n_rows) < 0.15).astype(float),
        "family_history": rng.integers(0, 2, n_rows).astype(float),
        "activity": rng.uniform(0, 10, n_rows),
        "alcohol": rng.exponential(3.0, n_rows),
        "sleep_hours": rng.normal(7, 1.2, n_rows),
        "stress": rng.uniform(0, 10, n_rows),
    }
    c = columns
    logit = (
        0.07 * (c["age"] - 55)
        + 0.5 * c["sex"]
        + 0.015 * (c["cholesterol"] - 200)
        - 0.04 * (c["hdl"] - 50)
        + 0.035 * (c["systolic_bp"] - 130)
        + 0.08 * (c["bmi"] - 27)
        + 0.9 * c["smoker"]
        + 1.0 * c["diabetes"]
        + 0.6 * c["family_history"]
        - 0.12 * (c["activity"] - 5)
        + 1.2 * (c["glucose"] > 126)
        + 0.1 * (c["stress"] - 5)
    )
    labels = (rng.uniform(size=n_rows) < expit(logit)).astype(np.int64)
    features = np.column_stack([columns[name] for name in HEARTRISK_FEATURES])
    return Dataset(
        features=features, labels=labels, feature_names=HEARTRISK_FEATURES, name="heartrisk_like"
    )


SYNTHETIC_DATASETS: dict[str, Callable[..., Dataset]] = {
    "separable": make_separable,
    "drug_like": make_drug_like,
    "heartrisk_like": make_heartrisk_like,
}


def make_synthetic(name: str, n_rows: int, seed: int) -> Dataset:
    """Build a registered synthetic dataset by name."""
    try:
        factory = SYNTHETIC_DATASETS[name]
    except KeyError:
        known = ", ".join(sorted(SYNTHETIC_DATASETS))
        raise DataError(f"unknown synthetic dataset '{name}' (known: {known})") from None
    return factory(n_rows=n_rows, seed=seed)
