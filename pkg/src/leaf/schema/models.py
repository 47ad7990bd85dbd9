from enum import StrEnum, auto


class ModelFamily(StrEnum):
    """Black-box classifier families of the model zoo."""

    LIN = auto()
    LOG = auto()
    RF = auto()
    KN = auto()
    MLP = auto()


class ExplainerMethod(StrEnum):
    LIME = auto()
    SHAP = auto()


class ShapleyMode(StrEnum):
    EXACT = auto()
    SAMPLED = auto()


class ReportFormat(StrEnum):
    JSON = auto()
    CSV = auto()


# Stable integer ids mixed into task seeds. Appending is safe, reordering is not.
EXPLAINER_IDS: dict[ExplainerMethod, int] = {
    ExplainerMethod.LIME: 0,
    ExplainerMethod.SHAP: 1,
}
