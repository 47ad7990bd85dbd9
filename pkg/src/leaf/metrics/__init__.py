from leaf.metrics.prescriptive import (
    DEFAULT_TARGET,
    normalizer,
    prescriptive_point,
    prescriptivity,
)
from leaf.metrics.scores import (
    binarize,
    conciseness,
    f1_score,
    local_concordance,
    local_fidelity,
)
from leaf.metrics.stability import jaccard, reiteration_similarity, support

__all__ = [
    "DEFAULT_TARGET",
    "normalizer",
    "prescriptive_point",
    "prescriptivity",
    "binarize",
    "conciseness",
    "f1_score",
    "local_concordance",
    "local_fidelity",
    "jaccard",
    "reiteration_similarity",
    "support",
]
