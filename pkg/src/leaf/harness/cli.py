"""
The `leaf` command line.

    leaf explain   --config run.cfg --instance 3       audit one decision (P1)
    leaf sweep     --config run.cfg --seed 7           model-development sweep (P2)
    leaf verify    --cases 100                         oracle self-checks
    leaf train     --dataset.synthetic heartrisk_like  model zoo accuracies
    leaf prescribe --config run.cfg --instance 3       explain, project, re-explain

Every config key is also a flag of the same dotted name (`--explain.k 4,8`)
and overrides the config file. Exit codes: 0 ok, 1 configuration error,
2 runtime failure.
"""

import argparse
import logging
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import pandas as pd

from leaf.core.settings import LogLevel, settings
from leaf.data.dataset import train_test_split
from leaf.harness.config import RunConfig, build_config, config_keys, load_config_file
from leaf.harness.report import MetricReport, emit_report, summary_frame
from leaf.harness.runner import prescribe, run_p1, run_p2
from leaf.harness.workspace import Workspace, load_dataset, prepare
from leaf.models.registry import accuracy, model_registry, train
from leaf.oracles.verify import CHECKS, run_verification
from leaf.utils.error_handler import ConfigError, ExitCode, handle_cli_error

logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise ConfigError(message)


def _add_run_flags(parser: argparse.ArgumentParser, seed_required: bool = False) -> None:
    parser.add_argument("--config", type=Path, help="Flat key = value config file")
    for key, is_list in config_keys().items():
        if key == "run.seed":
            continue
        parser.add_argument(f"--{key}", dest=key, metavar="A,B,..." if is_list else "VALUE")
    parser.add_argument(
        "--seed", "--run.seed", dest="run.seed", required=seed_required, help="Base seed"
    )


def _add_instance_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--instance", type=int, default=0, help="Row of the test split")
    group.add_argument("--x", help="Comma-separated feature vector to explain instead")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="leaf", description="Evaluate local linear explanations")
    parser.add_argument("--log-level", choices=[level.value for level in LogLevel])
    commands = parser.add_subparsers(dest="command", required=True)

    explain = commands.add_parser("explain", help="Audit a single decision")
    _add_run_flags(explain)
    _add_instance_flags(explain)
    explain.set_defaults(handler=cmd_explain)

    sweep = commands.add_parser("sweep", help="Sweep instances x models x explainers x K")
    _add_run_flags(sweep, seed_required=True)
    sweep.set_defaults(handler=cmd_sweep)

    verify = commands.add_parser("verify", help="Check the algorithms against the oracles")
    verify.add_argument("--cases", type=int, default=20, help="Random cases per check")
    verify.add_argument("--only", help=f"Comma list out of: {', '.join(CHECKS)}")
    verify.add_argument("--seed", type=int, default=0)
    verify.set_defaults(handler=cmd_verify)

    train_parser = commands.add_parser("train", help="Train the model zoo, print accuracies")
    _add_run_flags(train_parser)
    train_parser.set_defaults(handler=cmd_train)

    prescribe_parser = commands.add_parser(
        "prescribe", help="Project an instance onto its explanation boundary"
    )
    _add_run_flags(prescribe_parser)
    _add_instance_flags(prescribe_parser)
    prescribe_parser.set_defaults(handler=cmd_prescribe)
    return parser


def _flag_values(args: argparse.Namespace) -> dict[str, str]:
    return {
        key: getattr(args, key)
        for key in config_keys()
        if getattr(args, key, None) is not None
    }


def run_config_from_args(
    args: argparse.Namespace, defaults: dict[str, str] | None = None
) -> RunConfig:
    """`defaults`, then config file values, then the dotted flags."""
    values = dict(defaults or {})
    if args.config:
        values.update(load_config_file(args.config))
    values.update(_flag_values(args))
    return build_config(values)


def _instance(
    args: argparse.Namespace, workspace: Workspace
) -> tuple[np.ndarray, int, int | None]:
    """(x, test row or -1, label or None) selected by --instance / --x."""
    if args.x is not None:
        try:
            x = np.array([float(value) for value in args.x.split(",")])
        except ValueError:
            raise ConfigError(f"--x must be a comma list of numbers, got '{args.x}'") from None
        return x, -1, None
    row = args.instance
    if not 0 <= row < workspace.test.n_rows:
        raise ConfigError(
            f"--instance {row} outside the test split ({workspace.test.n_rows} rows)"
        )
    return workspace.test.features[row], row, int(workspace.test.labels[row])


def _write(report: MetricReport, cfg: RunConfig, default_name: str) -> Path:
    path = cfg.run.output or settings.REPORT_DIR / f"{default_name}.{cfg.run.format}"
    return emit_report(report, cfg.run.format, path)


def _print_cells(report: MetricReport) -> None:
    names = report.dataset.feature_names
    for cell in report.cells:
        print(f"\n[{cell.model_name} / {cell.explainer} / K={cell.K}] f(x) = {cell.prediction:.4f}")
        if cell.error:
            print(f"  failed runs: {cell.error}")
        if cell.reiteration_similarity is not None:
            print(f"  reiteration similarity  {cell.reiteration_similarity:.4f}")
        for metric, summary in cell.aggregates.items():
            print(f"  {metric:<23} mean {summary.mean:.4f}  median {summary.median:.4f}")
        if cell.first_explanation is not None:
            g = cell.first_explanation
            print(f"  first explanation: intercept {g.intercept:+.4f}")
            for index in sorted(g.weights, key=lambda i: -abs(g.weights[i])):
                print(f"    {names[index]:<20} {g.weights[index]:+.4f}")


def cmd_explain(args: argparse.Namespace) -> ExitCode:
    cfg = run_config_from_args(args)
    workspace = prepare(cfg)
    x, row, label = _instance(args, workspace)
    report = run_p1(cfg, x, workspace, instance_index=row, label=label)
    _print_cells(report)
    if cfg.run.output is not None:
        print(f"\nreport: {_write(report, cfg, 'explain')}")
    return ExitCode.OK


def cmd_sweep(args: argparse.Namespace) -> ExitCode:
    cfg = run_config_from_args(args)
    report = run_p2(cfg)
    path = _write(report, cfg, f"sweep-{cfg.run.seed}")
    with pd.option_context("display.width", 200, "display.max_columns", None):
        print(summary_frame(report).to_string(index=False, float_format="%.4f"))
    print(f"\n{len(report.cells)} cells, {report.failures} with failures; report: {path}")
    return ExitCode.OK


def cmd_verify(args: argparse.Namespace) -> ExitCode:
    only = [name.strip() for name in args.only.split(",")] if args.only else None
    unknown = [name for name in only or [] if name not in CHECKS]
    if unknown:
        raise ConfigError(f"unknown check '{unknown[0]}'")
    results = run_verification(seed=args.seed, cases=args.cases, only=only)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status}  {result.name:<30} {result.detail} ({result.seconds:.1f}s)")
    return ExitCode.OK if all(r.passed for r in results) else ExitCode.RUNTIME_FAILURE


def cmd_train(args: argparse.Namespace) -> ExitCode:
    """Table of train/test accuracy per family; every enabled family unless --model.families."""
    every_family = ",".join(str(entry["family"]) for entry in model_registry.list_families())
    cfg = run_config_from_args(args, defaults={"model.families": every_family})
    dataset = load_dataset(cfg.dataset, cfg.run.seed)
    train_split, test_split = train_test_split(dataset, cfg.dataset.test_fraction, cfg.run.seed)

    rows = []
    for spec in cfg.model.specs(cfg.run.seed):
        model = train(spec, train_split)
        rows.append(
            {
                "model": spec.label,
                "train_accuracy": model.training_accuracy,
                "test_accuracy": accuracy(model, test_split),
                "warnings": "; ".join(model.warnings),
            }
        )
    print(f"{dataset.name}: {train_split.n_rows} train / {test_split.n_rows} test rows")
    print(pd.DataFrame(rows).to_string(index=False, float_format="%.3f"))
    return ExitCode.OK


def cmd_prescribe(args: argparse.Namespace) -> ExitCode:
    cfg = run_config_from_args(args)
    workspace = prepare(cfg)
    x, _, _ = _instance(args, workspace)
    result = prescribe(cfg, x, workspace)
    print(f"f(x) = {result.prediction:.4f}, target boundary y' = {result.point.target}")
    if not result.point.defined:
        print(f"no prescription: {result.point.reason}")
        return ExitCode.OK
    for change in result.changes:
        print(f"  {change.feature:<20} {change.before:+.4f} -> {change.after:+.4f}")
    print(f"f(x') = {result.prediction_at_target:.4f}, prescriptivity {result.prescriptivity:.4f}")
    if cfg.run.output is not None:
        cfg.run.output.parent.mkdir(parents=True, exist_ok=True)
        cfg.run.output.write_text(result.model_dump_json(indent=2), encoding="utf-8")
        print(f"result: {cfg.run.output}")
    return ExitCode.OK


def configure_logging(level: str | None) -> None:
    log_level = LogLevel(level) if level else settings.LOG_LEVEL
    if logging.getLogger().handlers:
        logger.warning("logging already configured, keeping the existing handlers")
    logging.basicConfig(
        level=log_level.to_logging_level(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        configure_logging(args.log_level)
        return int(args.handler(args))
    except Exception as e:
        return int(handle_cli_error(e))


if __name__ == "__main__":
    raise SystemExit(main())
