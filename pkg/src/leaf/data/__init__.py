from leaf.data.dataset import (
    Dataset,
    FeatureStats,
    feature_stats,
    load_csv,
    train_test_split,
    write_csv,
)
from leaf.data.synthetic import (
    SYNTHETIC_DATASETS,
    make_drug_like,
    make_heartrisk_like,
    make_separable,
    make_synthetic,
)

__all__ = [
    "Dataset",
    "FeatureStats",
    "feature_stats",
    "load_csv",
    "train_test_split",
    "write_csv",
    "SYNTHETIC_DATASETS",
    "make_drug_like",
    "make_heartrisk_like",
    "make_separable",
    "make_synthetic",
]
