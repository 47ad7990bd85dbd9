"""
Tabular binary-classification datasets.

A `Dataset` is an all-numeric feature matrix with 0/1 labels. Features stay
in raw units everywhere: explanations are given in the same space.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike, NDArray

from leaf.utils.error_handler import DataError

logger = logging.getLogger(__name__)


def _frozen(values: ArrayLike, dtype: type) -> NDArray:
    array = np.array(values, dtype=dtype, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Dataset:
    """
    Immutable feature matrix (rows = instances) with binary labels.

    Attributes:
        features: (n_rows, F) float matrix, all values finite
        labels: (n_rows,) int vector with values in {0, 1}
        feature_names: one name per column
        name: free-form label used in reports
    """

    features: NDArray[np.float64]
    labels: NDArray[np.int64]
    feature_names: tuple[str, ...]
    name: str = field(default="dataset", compare=False)

    def __post_init__(self) -> None:
        features = np.asarray(self.features, dtype=float)
        labels = np.asarray(self.labels)
        if features.ndim != 2:
            raise DataError(f"features must be a 2-D matrix, got {features.ndim} dimension(s)")
        n_rows, n_features = features.shape
        if n_features < 1:
            raise DataError("dataset needs at least one feature")
        if n_rows < 1:
            raise DataError("dataset needs at least one row")
        if labels.shape != (n_rows,):
            raise DataError(f"expected {n_rows} labels, got shape {labels.shape}")
        if len(self.feature_names) != n_features:
            raise DataError(
                f"expected {n_features} feature names, got {len(self.feature_names)}"
            )
        bad = np.argwhere(~np.isfinite(features))
        if bad.size:
            row, column = bad[0]
            raise DataError("non-finite value", row=int(row) + 1, column=int(column) + 1)
        outside = np.flatnonzero((labels != 0) & (labels != 1))
        if outside.size:
            raise DataError("label outside {0,1}", row=int(outside[0]) + 1)

        object.__setattr__(self, "features", _frozen(features, np.float64))
        object.__setattr__(self, "labels", _frozen(labels, np.int64))
        object.__setattr__(self, "feature_names", tuple(str(n) for n in self.feature_names))

    @property
    def n_rows(self) -> int:
        return int(self.features.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.features.shape[1])

    def has_both_classes(self) -> bool:
        return bool(np.any(self.labels == 0) and np.any(self.labels == 1))

    def subset(self, rows: ArrayLike, name: str | None = None) -> "Dataset":
        """Rows `rows` (in the given order) as a new Dataset."""
        index = np.asarray(rows, dtype=int)
        return Dataset(
            features=self.features[index],
            labels=self.labels[index],
            feature_names=self.feature_names,
            name=name or self.name,
        )

    def to_frame(self, label_column: str = "label") -> pd.DataFrame:
        frame = pd.DataFrame(self.features, columns=list(self.feature_names))
        frame[label_column] = self.labels
        return frame


@dataclass(frozen=True)
class FeatureStats:
    """Per-feature mean and population standard deviation."""

    mean: NDArray[np.float64]
    stddev: NDArray[np.float64]

    def __post_init__(self) -> None:
        mean = np.asarray(self.mean, dtype=float)
        stddev = np.asarray(self.stddev, dtype=float)
        if mean.shape != stddev.shape or mean.ndim != 1:
            raise DataError("mean and stddev must be vectors of equal length")
        if np.any(stddev < 0):
            raise DataError("stddev entries must be non-negative")
        object.__setattr__(self, "mean", _frozen(mean, np.float64))
        object.__setattr__(self, "stddev", _frozen(stddev, np.float64))

    @property
    def n_features(self) -> int:
        return int(self.mean.shape[0])


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        return float("nan")


def _read_cells(path: Path) -> tuple[list[str], pd.DataFrame]:
    """
    Header names and the data cells as strings, one spare column wide.

    Rows with too many fields are cut to width + 1 so the spare column marks
    them; rows with too few fields come back padded with empty cells.
    """
    try:
        header = pd.read_csv(path, nrows=0, encoding="utf-8")
    except pd.errors.EmptyDataError as e:
        raise DataError(f"empty dataset file: {path.name}") from e
    columns = [str(c) for c in header.columns]
    width = len(columns)
    try:
        frame = pd.read_csv(
            path,
            header=None,
            skiprows=1,
            names=list(range(width + 1)),
            index_col=False,
            dtype=str,
            keep_default_na=False,
            engine="python",
            on_bad_lines=lambda fields: fields[: width + 1],
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        frame = pd.DataFrame(columns=list(range(width + 1)), dtype=str)
    return columns, frame.fillna("")


def load_csv(path: str | Path, name: str | None = None) -> Dataset:
    """
    Load a dataset from a CSV file whose last column is the label.

    Cells are parsed with `float`, so a file written by `write_csv` loads back
    cell-for-cell identical.

    Args:
        path: UTF-8 comma-separated file with a mandatory header row
        name: Dataset name for reports (defaults to the file stem)

    Returns:
        The parsed Dataset, rows in file order

    Raises:
        DataError: missing file, fewer than 2 rows, ragged row, non-numeric
            cell or label outside {0,1}; the message carries the data row
            (1-based, header excluded) and column
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"dataset file not found: {path}")

    columns, frame = _read_cells(path)
    width = len(columns)
    if width < 2:
        raise DataError("need at least one feature column and a label column")

    extra = frame[width].str.strip() != ""
    if extra.any():
        row = int(np.flatnonzero(extra.to_numpy())[0]) + 1
        raise DataError(f"ragged row: more than {width} fields", row=row, column=width + 1)

    n_rows = frame.shape[0]
    if n_rows < 2:
        raise DataError(f"dataset needs at least 2 rows, got {n_rows}")

    values = np.empty((n_rows, width), dtype=float)
    for position, column in enumerate(columns):
        raw = frame[position].str.strip()
        missing = raw == ""
        if missing.any():
            row = int(np.flatnonzero(missing.to_numpy())[0]) + 1
            raise DataError("ragged row: missing field", row=row, column=column)
        parsed = raw.map(_parse_float).to_numpy(dtype=float)
        invalid = ~np.isfinite(parsed)
        if invalid.any():
            row = int(np.flatnonzero(invalid)[0]) + 1
            raise DataError("non-numeric cell", row=row, column=column)
        values[:, position] = parsed

    labels = values[:, -1]
    outside = np.flatnonzero((labels != 0) & (labels != 1))
    if outside.size:
        raise DataError("label outside {0,1}", row=int(outside[0]) + 1)

    dataset = Dataset(
        features=values[:, :-1],
        labels=labels.astype(np.int64),
        feature_names=tuple(columns[:-1]),
        name=name or path.stem,
    )
    logger.info(f"Loaded {dataset.name}: {dataset.n_rows} rows, {dataset.n_features} features")
    return dataset


def write_csv(d: Dataset, path: str | Path, label_column: str = "label") -> Path:
    """
    Write a Dataset in the format `load_csv` reads.

    Floats are written with their shortest round-trip representation, so
    loading the file back gives a cell-for-cell identical matrix.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    d.to_frame(label_column).to_csv(path, index=False, float_format=None)
    return path


def feature_stats(d: Dataset) -> FeatureStats:
    """Column means and population standard deviations."""
    return FeatureStats(mean=d.features.mean(axis=0), stddev=d.features.std(axis=0, ddof=0))


def train_test_split(d: Dataset, test_fraction: float, seed: int) -> tuple[Dataset, Dataset]:
    """
    Seeded random partition of the rows into (train, test).

    The test part gets round(n * test_fraction) rows, clamped so both parts
    are non-empty. Each part keeps the original relative row order.
    """
    if not 0 < test_fraction < 1:
        raise DataError(f"test fraction must lie in (0, 1), got {test_fraction}")
    if d.n_rows < 2:
        raise DataError(f"need at least 2 rows to split, got {d.n_rows}")

    n_test = int(np.floor(d.n_rows * test_fraction + 0.5))
    n_test = min(max(n_test, 1), d.n_rows - 1)

    permutation = np.random.default_rng(seed).permutation(d.n_rows)
    test_rows = np.sort(permutation[:n_test])
    train_rows = np.sort(permutation[n_test:])
    return (
        d.subset(train_rows, name=f"{d.name}[train]"),
        d.subset(test_rows, name=f"{d.name}[test]"),
    )
