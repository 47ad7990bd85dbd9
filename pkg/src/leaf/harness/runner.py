"""
Orchestration of the two usage scenarios.

* `run_p1`: audit of a single decision (one model, one K, R explanations per
  explainer).
* `run_p2`: model-development sweep over instances x models x explainers x K.

Both expand into cells, and every cell into R tasks with derived seeds. Tasks
run on a thread pool; results are merged in task order, so serial and
parallel runs produce the same report.
"""

import logging
import os
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from datetime import UTC, datetime
from typing import TypeVar

import numpy as np
from numpy.typing import ArrayLike, NDArray

from leaf.core.settings import settings
from leaf.explainers.registry import ExplainContext, explain
from leaf.harness.config import RunConfig
from leaf.harness.report import (
    CellResult,
    DatasetInfo,
    FeatureChange,
    MetricReport,
    PrescriptionResult,
    RunRecord,
    Timing,
    aggregate_runs,
)
from leaf.harness.seeds import assert_unique, derive_task_seed, fidelity_seed
from leaf.harness.workspace import Workspace, prepare
from leaf.metrics.prescriptive import prescriptive_point, prescriptivity
from leaf.metrics.scores import conciseness, local_concordance, local_fidelity
from leaf.metrics.stability import reiteration_similarity
from leaf.schema.explanation import LinearExplanation
from leaf.schema.metrics import MetricScores
from leaf.schema.models import EXPLAINER_IDS, ExplainerMethod
from leaf.utils.error_handler import ConfigError, RunError

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


@dataclass(frozen=True)
class Cell:
    instance: int
    x: NDArray[np.float64]
    label: int | None
    model_index: int
    method: ExplainerMethod
    k_index: int
    K: int


@dataclass(frozen=True)
class Task:
    cell: int
    repetition: int
    seed: int


@dataclass(frozen=True)
class TaskOutcome:
    explanation: LinearExplanation | None = None
    record: RunRecord | None = None
    error: RunError | None = None


def worker_count(cfg: RunConfig) -> int:
    return cfg.run.workers or settings.WORKERS or os.cpu_count() or 1


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int) -> list[R]:
    """map() on a thread pool; results keep the order of `items`."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def score_explanation(
    workspace: Workspace, model_index: int, g: LinearExplanation, x: NDArray[np.float64], seed: int
) -> MetricScores:
    """All per-explanation metrics; fidelity is scored on its own neighborhood."""
    cfg = workspace.config
    f = workspace.models[model_index]
    neighborhood = cfg.explain.neighborhood().model_copy(update={"seed": seed})
    point = prescriptive_point(g, x, cfg.metrics.target)
    return MetricScores(
        conciseness=conciseness(g),
        local_fidelity=local_fidelity(f, g, x, workspace.stats, neighborhood),
        local_concordance=local_concordance(f, g, x),
        prescriptivity=prescriptivity(f, g, x, cfg.metrics.target) if point.defined else None,
        prescriptivity_reason=point.reason,
    )


def _run_task(
    workspace: Workspace, context: ExplainContext, cells: Sequence[Cell], task: Task
) -> TaskOutcome:
    cell = cells[task.cell]
    f = workspace.models[cell.model_index]
    try:
        g = explain(cell.method, f, cell.x, cell.K, context, task.seed)
        scoring_seed = fidelity_seed(task.seed)
        scores = score_explanation(workspace, cell.model_index, g, cell.x, scoring_seed)
    except Exception as e:
        error = RunError(
            e,
            instance=cell.instance,
            model=f.name,
            explainer=cell.method,
            K=cell.K,
            repetition=task.repetition,
        )
        logger.warning(str(error))
        logger.debug("task failure", exc_info=True)
        return TaskOutcome(error=error)
    record = RunRecord(
        repetition=task.repetition, seed=task.seed, fidelity_seed=scoring_seed, scores=scores
    )
    return TaskOutcome(explanation=g, record=record)


def make_tasks(cfg: RunConfig, cells: Sequence[Cell]) -> list[Task]:
    """R tasks per cell, each with a distinct derived seed."""
    tasks = []
    for position, cell in enumerate(cells):
        for repetition in range(cfg.metrics.repetitions):
            seed = derive_task_seed(
                cfg.run.seed,
                instance=max(cell.instance, 0),
                repetition=repetition,
                explainer_id=EXPLAINER_IDS[cell.method],
                model_id=cell.model_index,
                k_index=cell.k_index,
            )
            tasks.append(Task(cell=position, repetition=repetition, seed=seed))
    assert_unique(task.seed for task in tasks)
    return tasks


def _assemble(
    workspace: Workspace, cells: Sequence[Cell], tasks: Sequence[Task], outcomes: list[TaskOutcome]
) -> list[CellResult]:
    grouped: list[list[TaskOutcome]] = [[] for _ in cells]
    for task, outcome in zip(tasks, outcomes, strict=True):
        grouped[task.cell].append(outcome)

    results = []
    for cell, cell_outcomes in zip(cells, grouped, strict=True):
        f = workspace.models[cell.model_index]
        explanations = [o.explanation for o in cell_outcomes if o.explanation is not None]
        runs = [o.record for o in cell_outcomes if o.record is not None]
        errors = [o.error for o in cell_outcomes if o.error is not None]
        prediction = f.predict(cell.x)

        reiteration = None
        if workspace.config.metrics.reiteration and len(explanations) >= 2:
            reiteration = reiteration_similarity(explanations)

        results.append(
            CellResult(
                instance=cell.instance,
                x=cell.x.tolist(),
                model=f.family,
                model_name=f.name,
                explainer=cell.method,
                K=cell.K,
                label=cell.label,
                prediction=prediction,
                correctly_classified=(
                    None if cell.label is None else bool((prediction >= 0.5) == bool(cell.label))
                ),
                runs=runs,
                reiteration_similarity=reiteration,
                aggregates=aggregate_runs(runs),
                first_explanation=explanations[0] if explanations else None,
                error=str(errors[0]) if errors else None,
            )
        )
    return results


def run_cells(workspace: Workspace, cells: Sequence[Cell], command: str) -> MetricReport:
    """Run every task of `cells` and merge the results into a report."""
    cfg = workspace.config
    started_at = datetime.now(UTC).isoformat(timespec="seconds")
    clock = time.perf_counter()

    tasks = make_tasks(cfg, cells)
    context = workspace.context()
    workers = worker_count(cfg)
    logger.info(f"{command}: {len(cells)} cells, {len(tasks)} tasks on {workers} workers")

    outcomes = ordered_map(
        lambda task: _run_task(workspace, context, cells, task), tasks, workers
    )
    results = _assemble(workspace, cells, tasks, outcomes)
    failures = sum(1 for result in results if result.error is not None)
    if failures:
        logger.warning(f"{failures} of {len(results)} cells had failed runs")

    return MetricReport(
        command=command,
        config=cfg,
        dataset=DatasetInfo(
            name=workspace.dataset.name,
            n_rows=workspace.dataset.n_rows,
            n_features=workspace.n_features,
            n_train=workspace.train.n_rows,
            n_test=workspace.test.n_rows,
            feature_names=list(workspace.dataset.feature_names),
        ),
        models=list(workspace.descriptors),
        cells=results,
        failures=failures,
        timing=Timing(started_at=started_at, wall_seconds=time.perf_counter() - clock),
    )


def _workspace_for(cfg: RunConfig, workspace: Workspace | None) -> Workspace:
    """
    `workspace` rebound to `cfg`, or a fresh one.

    A passed workspace must have been prepared for the same dataset and models;
    only the explanation, instance and run settings of `cfg` may differ.
    """
    if workspace is None:
        return prepare(cfg)
    cfg.check_against(workspace.n_features)
    if workspace.config is cfg:
        return workspace
    return replace(workspace, config=cfg)


def _as_instance(workspace: Workspace, x: ArrayLike) -> NDArray[np.float64]:
    x = np.asarray(x, dtype=float)
    if x.shape != (workspace.n_features,) or not np.all(np.isfinite(x)):
        raise ConfigError(
            f"instance must be {workspace.n_features} finite values, got shape {x.shape}"
        )
    return x


def run_p1(
    cfg: RunConfig,
    instance: ArrayLike,
    workspace: Workspace | None = None,
    instance_index: int = -1,
    label: int | None = None,
) -> MetricReport:
    """
    Audit one decision: R explanations of f at `instance` per configured explainer.

    Args:
        cfg: Run configuration with a single model family and a single K
        instance: Vector to explain
        workspace: Prepared workspace for `cfg`; built when omitted
        instance_index: Test-split row of `instance`, -1 for an ad-hoc vector
        label: True label of `instance`, when known

    Raises:
        ConfigError: more than one model or K, or a malformed instance
    """
    if len(cfg.model.families) != 1 or len(cfg.explain.k) != 1:
        raise ConfigError("explain audits a single model family and a single K")
    workspace = _workspace_for(cfg, workspace)
    x = _as_instance(workspace, instance)
    cells = [
        Cell(
            instance=instance_index,
            x=x,
            label=label,
            model_index=0,
            method=method,
            k_index=0,
            K=cfg.explain.k[0],
        )
        for method in cfg.explain.methods
    ]
    return run_cells(workspace, cells, "explain")


def sweep_cells(workspace: Workspace) -> list[Cell]:
    """instances x models x explainers x K, the same test rows for every model."""
    cfg = workspace.config
    cells = []
    for row in workspace.instance_rows():
        x = np.asarray(workspace.test.features[row], dtype=float)
        label = int(workspace.test.labels[row])
        for model_index in range(len(workspace.models)):
            for method in cfg.explain.methods:
                for k_index, k in enumerate(cfg.explain.k):
                    cells.append(Cell(row, x, label, model_index, method, k_index, k))
    return cells


def run_p2(cfg: RunConfig, workspace: Workspace | None = None) -> MetricReport:
    """
    Model-development sweep; each cell aggregates R runs.

    A failing run is recorded on its cell and the sweep carries on.
    """
    workspace = _workspace_for(cfg, workspace)
    return run_cells(workspace, sweep_cells(workspace), "sweep")


def prescribe(
    cfg: RunConfig,
    instance: ArrayLike,
    workspace: Workspace | None = None,
    method: ExplainerMethod | None = None,
) -> PrescriptionResult:
    """
    Explain x, project it onto the explanation boundary, then check the black
    box at x' and explain it there again.

    Uses the first configured model family, explainer and K.
    """
    workspace = _workspace_for(cfg, workspace)
    x = _as_instance(workspace, instance)
    method = method or cfg.explain.methods[0]
    K = cfg.explain.k[0]
    f = workspace.models[0]
    context = workspace.context()
    seed = derive_task_seed(cfg.run.seed, 0, 0, EXPLAINER_IDS[method], 0, 0)

    g = explain(method, f, x, K, context, seed)
    point = prescriptive_point(g, x, cfg.metrics.target)
    names = workspace.dataset.feature_names
    changes = [
        FeatureChange(feature=names[i], index=i, before=float(x[i]), after=point.x_prime[i])
        for i in range(len(x))
        if point.delta[i] != 0.0
    ]
    result = PrescriptionResult(
        model=f.family,
        model_name=f.name,
        explainer=method,
        K=K,
        x=x.tolist(),
        prediction=f.predict(x),
        explanation=g,
        point=point,
        changes=changes,
    )
    if not point.defined:
        logger.warning(f"no boundary point: {point.reason}")
        return result

    x_prime = np.asarray(point.x_prime)
    result.prediction_at_target = f.predict(x_prime)
    result.prescriptivity = prescriptivity(f, g, x, cfg.metrics.target)
    result.explanation_at_target = explain(method, f, x_prime, K, context, seed)
    return result
