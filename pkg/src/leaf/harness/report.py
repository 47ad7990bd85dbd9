"""
Run reports: schema, summaries and JSON/CSV emission.

JSON holds the full nested report. CSV holds one row per explanation run
(instance, model, explainer, K, repetition) with the metric columns; the
cell-level fields are repeated on every row of the cell.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.typing import ArrayLike
from pydantic import BaseModel, Field, ValidationError

from leaf.harness.config import RunConfig
from leaf.models.base import ModelDescriptor
from leaf.schema.explanation import LinearExplanation
from leaf.schema.metrics import MetricScores, PrescriptivePoint
from leaf.schema.models import ExplainerMethod, ModelFamily, ReportFormat
from leaf.utils.error_handler import ReportError

logger = logging.getLogger(__name__)

REPORT_VERSION = 2
SUMMARIZED_METRICS = ("conciseness", "local_fidelity", "local_concordance", "prescriptivity")


class Summary(BaseModel):
    """Five-number summary plus mean, enough to redraw a boxplot."""

    min: float
    q1: float
    median: float
    q3: float
    max: float
    mean: float
    count: int = Field(ge=1)


class RunRecord(BaseModel):
    repetition: int = Field(ge=0)
    seed: int = Field(ge=0, description="Derived task seed that reproduces this run")
    fidelity_seed: int = Field(ge=0, description="Seed of the neighborhood fidelity is scored on")
    scores: MetricScores


class CellResult(BaseModel):
    """R explanation runs of one (instance, model, explainer, K) cell."""

    instance: int = Field(description="Row of the test split, or -1 for an ad-hoc vector")
    x: list[float]
    model: ModelFamily
    model_name: str = Field(description="Model label, distinguishes variants of a family")
    explainer: ExplainerMethod
    K: int = Field(ge=1)
    label: int | None = Field(default=None, description="True label, when known")
    prediction: float = Field(description="f(x)")
    correctly_classified: bool | None = None
    runs: list[RunRecord] = Field(default_factory=list)
    reiteration_similarity: float | None = Field(default=None, ge=0, le=1)
    aggregates: dict[str, Summary] = Field(default_factory=dict)
    first_explanation: LinearExplanation | None = None
    error: str | None = Field(default=None, description="First failure among the runs")


class DatasetInfo(BaseModel):
    name: str
    n_rows: int
    n_features: int
    n_train: int
    n_test: int
    feature_names: list[str]


class Timing(BaseModel):
    """Excluded from the determinism check."""

    started_at: str
    wall_seconds: float


class MetricReport(BaseModel):
    version: int = REPORT_VERSION
    command: str
    config: RunConfig
    dataset: DatasetInfo
    models: list[ModelDescriptor]
    cells: list[CellResult]
    failures: int = Field(default=0, ge=0, description="Cells with at least one failed run")
    timing: Timing | None = None

    def fingerprint(self) -> str:
        """Canonical JSON without the timing block."""
        return self.model_dump_json(exclude={"timing"})


class FeatureChange(BaseModel):
    feature: str
    index: int
    before: float
    after: float


class PrescriptionResult(BaseModel):
    """Outcome of the explain / project / re-explain workflow on one instance."""

    model: ModelFamily
    model_name: str
    explainer: ExplainerMethod
    K: int
    x: list[float]
    prediction: float = Field(description="f(x)")
    explanation: LinearExplanation
    point: PrescriptivePoint
    changes: list[FeatureChange]
    prediction_at_target: float | None = Field(default=None, description="f(x')")
    prescriptivity: float | None = None
    explanation_at_target: LinearExplanation | None = Field(
        default=None, description="Explanation of f at x'"
    )


def summarize(values: ArrayLike) -> Summary | None:
    """Summary of the finite values, None when there are none."""
    values = np.asarray(values, dtype=float)
    values = values[np.isfinite(values)]
    if values.size == 0:
        return None
    q1, median, q3 = np.quantile(values, [0.25, 0.5, 0.75])
    return Summary(
        min=float(values.min()),
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        max=float(values.max()),
        mean=float(values.mean()),
        count=int(values.size),
    )


def aggregate_runs(runs: list[RunRecord]) -> dict[str, Summary]:
    aggregates = {}
    for metric in SUMMARIZED_METRICS:
        values = [getattr(run.scores, metric) for run in runs]
        summary = summarize([np.nan if value is None else value for value in values])
        if summary is not None:
            aggregates[metric] = summary
    return aggregates


def records_frame(report: MetricReport) -> pd.DataFrame:
    """One row per explanation run."""
    rows = []
    for cell in report.cells:
        for run in cell.runs:
            rows.append(
                {
                    "instance": cell.instance,
                    "model": str(cell.model),
                    "model_name": cell.model_name,
                    "explainer": str(cell.explainer),
                    "K": cell.K,
                    "repetition": run.repetition,
                    "seed": run.seed,
                    "fidelity_seed": run.fidelity_seed,
                    "label": cell.label,
                    "prediction": cell.prediction,
                    "correctly_classified": cell.correctly_classified,
                    "conciseness": run.scores.conciseness,
                    "local_fidelity": run.scores.local_fidelity,
                    "local_concordance": run.scores.local_concordance,
                    "prescriptivity": run.scores.prescriptivity,
                    "reiteration_similarity": cell.reiteration_similarity,
                }
            )
    frame = pd.DataFrame(rows)
    if not frame.empty:
        for column in ("prescriptivity", "reiteration_similarity"):
            frame[column] = pd.to_numeric(frame[column])
    return frame


def summary_frame(report: MetricReport) -> pd.DataFrame:
    """
    Per (model name, explainer, K) means and medians over every run, plus the mean
    reiteration similarity over cells.
    """
    runs = records_frame(report)
    if runs.empty:
        return pd.DataFrame()
    keys = ["model", "model_name", "explainer", "K"]
    metrics = list(SUMMARIZED_METRICS)
    table = runs.groupby(keys)[metrics].agg(["mean", "median"])
    table.columns = [f"{metric}_{statistic}" for metric, statistic in table.columns]

    cells = pd.DataFrame(
        [
            {
                "model": str(cell.model),
                "model_name": cell.model_name,
                "explainer": str(cell.explainer),
                "K": cell.K,
                "reiteration_similarity": cell.reiteration_similarity,
            }
            for cell in report.cells
        ]
    )
    cells["reiteration_similarity"] = pd.to_numeric(cells["reiteration_similarity"])
    reiteration = cells.groupby(keys)["reiteration_similarity"].mean()
    table["reiteration_similarity_mean"] = reiteration
    return table.reset_index()


def emit_report(report: MetricReport, fmt: ReportFormat | str, path: str | Path) -> Path:
    """
    Write `report` as JSON (full) or CSV (one row per run).

    Raises:
        ReportError: the file cannot be written
    """
    fmt = ReportFormat(fmt)
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        if fmt == ReportFormat.JSON:
            path.write_text(report.model_dump_json(indent=2), encoding="utf-8")
        else:
            records_frame(report).to_csv(path, index=False)
    except OSError as e:
        raise ReportError(f"cannot write report {path.name}: {e.strerror}") from e
    logger.info(f"wrote {fmt} report with {len(report.cells)} cells to {path}")
    return path


def load_report(path: str | Path) -> MetricReport:
    """
    Read a JSON report back.

    Raises:
        ReportError: missing file or invalid content
    """
    path = Path(path)
    try:
        return MetricReport.model_validate_json(path.read_text(encoding="utf-8"))
    except OSError as e:
        raise ReportError(f"cannot read report {path.name}: {e.strerror}") from e
    except ValidationError as e:
        raise ReportError(f"{path.name} is not a valid report: {e.error_count()} errors") from e
