import numpy as np
import pandas as pd
import pytest

from leaf.harness import emit_report, load_report, records_frame, summarize, summary_frame
from leaf.harness.report import SUMMARIZED_METRICS
from leaf.utils.error_handler import ReportError


def test_summarize():
    summary = summarize([5.0, 1.0, 4.0, 2.0, 3.0])
    assert (summary.min, summary.q1, summary.median, summary.q3, summary.max) == (
        1.0,
        2.0,
        3.0,
        4.0,
        5.0,
    )
    assert summary.mean == 3.0
    assert summary.count == 5


def test_summarize_skips_missing():
    assert summarize([np.nan, 0.5]).count == 1
    assert summarize([np.nan]) is None


def test_json_round_trip(sweep_report, tmp_path):
    path = emit_report(sweep_report, "json", tmp_path / "sweep.json")
    assert load_report(path) == sweep_report


def test_csv_rows(sweep_report, tmp_path):
    path = emit_report(sweep_report, "csv", tmp_path / "sweep.csv")
    frame = pd.read_csv(path)
    assert len(frame) == len(sweep_report.cells) * 3
    assert {"instance", "model", "model_name", "explainer", "K", "repetition", "seed"} <= set(
        frame.columns
    )
    assert set(SUMMARIZED_METRICS) <= set(frame.columns)
    assert frame["seed"].tolist() == [
        run.seed for cell in sweep_report.cells for run in cell.runs
    ]


def test_csv_matches_json_aggregates(sweep_report, tmp_path):
    frame = pd.read_csv(emit_report(sweep_report, "csv", tmp_path / "sweep.csv"))
    groups = frame.groupby(["instance", "explainer"], sort=False)
    for cell in sweep_report.cells:
        rows = groups.get_group((cell.instance, str(cell.explainer)))
        for metric, summary in cell.aggregates.items():
            recomputed = summarize(rows[metric].to_numpy(dtype=float))
            assert recomputed.mean == pytest.approx(summary.mean, abs=1e-12)
            assert recomputed.median == pytest.approx(summary.median, abs=1e-12)
            assert recomputed.q1 == pytest.approx(summary.q1, abs=1e-12)
            assert recomputed.q3 == pytest.approx(summary.q3, abs=1e-12)


def test_records_frame_columns(sweep_report):
    frame = records_frame(sweep_report)
    assert frame["prescriptivity"].dtype == float
    assert (frame["K"] == 4).all()


def test_summary_frame(sweep_report):
    table = summary_frame(sweep_report)
    assert len(table) == 2
    assert "local_fidelity_mean" in table.columns
    shap = table[table["explainer"] == "shap"]
    assert shap["reiteration_similarity_mean"].iloc[0] == 1.0


def test_fingerprint_ignores_timing(sweep_report):
    shifted = sweep_report.model_copy(
        update={"timing": sweep_report.timing.model_copy(update={"wall_seconds": 99.0})}
    )
    assert shifted.fingerprint() == sweep_report.fingerprint()


def test_write_failure(sweep_report, tmp_path):
    blocker = tmp_path / "file.txt"
    blocker.write_text("not a directory")
    with pytest.raises(ReportError, match="cannot write report"):
        emit_report(sweep_report, "json", blocker / "sweep.json")


def test_load_invalid(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"version": 1}')
    with pytest.raises(ReportError, match="not a valid report"):
        load_report(path)
    with pytest.raises(ReportError, match="cannot read"):
        load_report(tmp_path / "absent.json")
