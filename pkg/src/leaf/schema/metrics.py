from pydantic import BaseModel, Field


class PrescriptivePoint(BaseModel):
    """
    Projection x' of an instance onto the explanation boundary g(z) = target.

    Only explained features move: `delta` is zero outside the support of g.
    When g has no non-zero weight the boundary is unreachable and
    `defined` is False.
    """

    x_prime: list[float]
    delta: list[float]
    target: float = Field(gt=0, lt=1, description="Boundary value y'")
    normalizer: float = Field(description="C = max(y', 1 - y')")
    defined: bool
    reason: str | None = None


class MetricScores(BaseModel):
    """Scores of one explanation, plus the set-level reiteration similarity."""

    conciseness: int = Field(ge=0)
    local_fidelity: float = Field(ge=0, le=1)
    local_concordance: float = Field(ge=0, le=1)
    prescriptivity: float | None = Field(default=None, ge=0, le=1)
    prescriptivity_reason: str | None = Field(
        default=None, description="Why prescriptivity is undefined"
    )
    reiteration_similarity: float | None = Field(default=None, ge=0, le=1)
