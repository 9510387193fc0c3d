import json
from pathlib import Path

import pandas as pd
import pytest

from twobin.error_handling import ConfigError, ReportWriteError
from twobin.harness import SCHEMA_VERSION, ExperimentConfig, RunReport, TrialReport, emit_report, load_report, run_trial
from twobin.harness.report import Distribution, summarize

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def small_report():
    config = ExperimentConfig(n=64, s=3.0, trials=2)
    trials = [run_trial(config, seed) for seed in config.seeds()]
    return RunReport(config=config.to_dict(), trials=trials)


def test_distribution_of_values():
    """Test mean, max and histogram of a sample"""
    d = Distribution.of([0, 0, 1, 3])
    assert d.mean == pytest.approx(1.0)
    assert d.max == 3
    assert d.histogram == {0: 2, 1: 1, 3: 1}
    assert Distribution.of([]) == Distribution()


def test_empty_trial_report_has_every_field():
    """Test a default trial report serializes every schema field"""
    expected = json.loads((FIXTURES / "report_schema.json").read_text())
    data = json.loads(json.dumps(TrialReport().to_dict()))
    assert sorted(data) == sorted(expected["trial_fields"])
    for name in expected["distribution_fields"]:
        assert sorted(data[name]) == ["histogram", "max", "mean"]


def test_run_report_layout(small_report):
    """Test the top-level report keys and summary fields"""
    expected = json.loads((FIXTURES / "report_schema.json").read_text())
    data = small_report.to_dict()
    assert sorted(data) == sorted(expected["run_fields"])
    assert data["schema_version"] == SCHEMA_VERSION
    assert sorted(data["summary"]) == sorted(expected["summary_fields"])


def test_json_round_trip(small_report, tmp_path):
    """Test a written JSON report loads back with integer histogram keys"""
    path = emit_report(small_report, "json", tmp_path / "out" / "report.json")
    loaded = load_report(path)
    assert loaded.summary == json.loads(json.dumps(small_report.summary))
    assert [t.deterministic_dict() for t in loaded.trials] == \
        [json.loads(json.dumps(t.deterministic_dict())) for t in small_report.trials]
    assert all(isinstance(k, int) for k in loaded.trials[0].load_histogram)
    assert loaded.trials[0].moves == small_report.trials[0].moves


def test_csv_report(small_report, tmp_path):
    """Test the CSV form has one row per trial and dotted nested columns"""
    path = emit_report(small_report, "csv", tmp_path / "report.csv")
    frame = pd.read_csv(path)
    assert len(frame) == 2
    assert frame.columns[0] == "schema_version"
    for column in ("seed", "policy", "max_load", "moves.mean", "moves.max", "nodes_explored.max",
                   "cycle_edges_seen.total", "wall_time"):
        assert column in frame.columns
    assert frame["seed"].tolist() == [0, 1]


def test_schema_version_checked(small_report):
    """Test reports from another schema version are refused"""
    data = small_report.to_dict()
    data["schema_version"] = SCHEMA_VERSION + 1
    with pytest.raises(ConfigError):
        RunReport.from_dict(data)


def test_unknown_format(small_report, tmp_path):
    """Test unsupported formats are rejected"""
    with pytest.raises(ConfigError):
        emit_report(small_report, "xml", tmp_path / "r.xml")


def test_unwritable_path(small_report, tmp_path):
    """Test write failures surface as ReportWriteError"""
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(ReportWriteError):
        emit_report(small_report, "json", blocker / "report.json")
    with pytest.raises(ReportWriteError):
        emit_report(small_report, "csv", blocker / "report.csv")


def test_summary_aggregates():
    """Test run-level aggregates over hand-made trials"""
    a = TrialReport(seed=0, failures=2, max_load=2, utilization=0.5, stuck_events=1,
                    nodes_explored=Distribution(2.0, 5, {}), moves=Distribution(1.0, 3, {}))
    b = TrialReport(seed=1, failures=0, max_load=1, utilization=0.7,
                    nodes_explored=Distribution(4.0, 9, {}), moves=Distribution(0.0, 0, {}))
    summary = summarize([a, b])
    assert summary["trials"] == 2
    assert summary["trials_with_failure"] == 1
    assert summary["failures"] == 2
    assert summary["max_load"] == 2
    assert summary["mean_utilization"] == pytest.approx(0.6)
    assert summary["mean_nodes_explored"] == pytest.approx(3.0)
    assert summary["max_nodes_explored"] == 9
    assert summary["max_moves"] == 3
    assert summary["stuck_events"] == 1
    assert summarize([]) == {"trials": 0}
