from leaf.schema.explanation import (
    ExplanationMeta,
    LinearExplanation,
    NeighborhoodConfig,
    ShapleyAttribution,
    default_kernel_width,
)
from leaf.schema.metrics import MetricScores, PrescriptivePoint
from leaf.schema.models import (
    EXPLAINER_IDS,
    ExplainerMethod,
    ModelFamily,
    ReportFormat,
    ShapleyMode,
)

__all__ = [
    "EXPLAINER_IDS",
    "ExplainerMethod",
    "ExplanationMeta",
    "LinearExplanation",
    "MetricScores",
    "ModelFamily",
    "NeighborhoodConfig",
    "PrescriptivePoint",
    "ReportFormat",
    "ShapleyAttribution",
    "ShapleyMode",
    "default_kernel_width",
]
