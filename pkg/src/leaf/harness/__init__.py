from leaf.harness.config import RunConfig, build_config, config_keys, load_config_file
from leaf.harness.report import (
    CellResult,
    MetricReport,
    PrescriptionResult,
    RunRecord,
    Summary,
    emit_report,
    load_report,
    records_frame,
    summarize,
    summary_frame,
)
from leaf.harness.runner import prescribe, run_p1, run_p2
from leaf.harness.seeds import derive_task_seed, fidelity_seed, splitmix64
from leaf.harness.workspace import Workspace, prepare

__all__ = [
    "RunConfig",
    "build_config",
    "config_keys",
    "load_config_file",
    "CellResult",
    "MetricReport",
    "PrescriptionResult",
    "RunRecord",
    "Summary",
    "emit_report",
    "load_report",
    "records_frame",
    "summarize",
    "summary_frame",
    "prescribe",
    "run_p1",
    "run_p2",
    "derive_task_seed",
    "fidelity_seed",
    "splitmix64",
    "Workspace",
    "prepare",
]
