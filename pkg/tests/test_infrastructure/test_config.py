import pytest
import yaml

import twobin.config as config_module
from twobin.config import TwoBinConfig, get_config, load_config
from twobin.error_handling import ConfigError


@pytest.fixture(autouse=True)
def fresh_config(monkeypatch):
    monkeypatch.setattr(config_module, "_config", None)


def test_defaults_without_file():
    """Test built-in defaults apply when no file exists"""
    config = TwoBinConfig("missing.yaml")
    assert config.table.capacity == 2
    assert config.table.depth_slack == 4
    assert config.harness.trials == 10
    assert config.analysis.grid_points == 100_000
    assert config.validate_config()


def test_yaml_file_overrides_defaults(tmp_path):
    """Test values from the YAML file replace defaults; unknown keys are ignored"""
    path = tmp_path / "twobin.yaml"
    path.write_text(yaml.safe_dump({
        "table": {"capacity": 4, "bogus": 1},
        "harness": {"trials": 3, "on_failure": "skip"},
        "extras": {"x": 1},
    }))
    config = TwoBinConfig(str(path))
    assert config.table.capacity == 4
    assert config.harness.trials == 3
    assert config.harness.on_failure == "skip"
    assert not hasattr(config.table, "bogus")


def test_default_file_in_working_directory(tmp_path):
    """Test twobin.yaml in the working directory is picked up"""
    (tmp_path / "twobin.yaml").write_text("analysis:\n  grid_points: 5000\n")
    assert get_config().analysis.grid_points == 5000


def test_environment_overrides_file(tmp_path, monkeypatch):
    """Test TWOBIN_<SECTION>_<KEY> wins over the file and is type-coerced"""
    path = tmp_path / "c.yaml"
    path.write_text("harness:\n  trials: 3\n")
    monkeypatch.setenv("TWOBIN_HARNESS_TRIALS", "7")
    monkeypatch.setenv("TWOBIN_SYSTEM_JSON_LOGS", "yes")
    monkeypatch.setenv("TWOBIN_ANALYSIS_TARGET", "1e-6")
    config = load_config(str(path))
    assert config.harness.trials == 7
    assert config.system.json_logs is True
    assert config.analysis.target == pytest.approx(1e-6)
    assert get_config() is config


def test_bad_environment_value(monkeypatch):
    """Test a non-numeric override for a numeric field is a ConfigError"""
    monkeypatch.setenv("TWOBIN_TABLE_CAPACITY", "two")
    with pytest.raises(ConfigError):
        TwoBinConfig("missing.yaml")


def test_unreadable_yaml(tmp_path):
    """Test malformed YAML is a ConfigError"""
    path = tmp_path / "bad.yaml"
    path.write_text("table: [unclosed\n")
    with pytest.raises(ConfigError):
        TwoBinConfig(str(path))


def test_validation_problems():
    """Test each invalid setting is reported"""
    config = TwoBinConfig("missing.yaml")
    config.table.capacity = 0
    config.harness.on_failure = "retry"
    config.analysis.grid_points = 10
    config.system.log_level = "LOUD"
    problems = config.problems()
    assert len(problems) == 4
    assert not config.validate_config()


def test_update_and_save(tmp_path):
    """Test section updates and a YAML round trip"""
    config = TwoBinConfig("missing.yaml")
    config.update_config("table", "node_factor", 12)
    with pytest.raises(ConfigError):
        config.update_config("table", "nope", 1)
    with pytest.raises(ConfigError):
        config.get_config("nope")
    path = tmp_path / "saved.yaml"
    config.save_config(str(path))
    assert TwoBinConfig(str(path)).table.node_factor == 12
