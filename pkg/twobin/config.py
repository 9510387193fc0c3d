#!/usr/bin/env python3
"""
twobin Configuration
Centralized configuration with validation and environment management
"""

import logging
import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional

import yaml
from dotenv import load_dotenv

from .error_handling import ConfigError

logger = logging.getLogger(__name__)

ENV_PREFIX = "TWOBIN_"
DEFAULT_CONFIG_FILE = "twobin.yaml"


@dataclass
class TableConfig:
    """Bucket table and insert policy defaults"""
    capacity: int = 2
    depth_slack: int = 4        # the O(1) added to ceil(log2 log2 n)
    node_factor: int = 8        # node budget = node_factor * ceil(log2 n)
    walk_step_factor: int = 8   # walk budget = walk_step_factor * ceil(log2 n)


@dataclass
class HarnessConfig:
    """Experiment driver defaults"""
    trials: int = 10
    base_seed: int = 0
    n_jobs: int = 1
    on_failure: str = "stop"
    key_source: str = "sequential"
    report_dir: str = "reports"


@dataclass
class AnalysisConfig:
    """Recurrence and positivity scan settings"""
    grid_points: int = 100_000
    converge_iters: int = 10_000
    converge_cutoff: float = 1e-3
    stabilize_tol: float = 1e-12
    target: float = 1e-9


@dataclass
class SystemConfig:
    """Logging settings"""
    log_level: str = "INFO"
    log_file: str = "twobin.log"
    log_dir: str = "logs"
    max_log_size: int = 10 * 1024 * 1024
    log_backup_count: int = 5
    json_logs: bool = False
    file_logging: bool = True


SECTIONS = ("table", "harness", "analysis", "system")


class TwoBinConfig:
    """Main configuration manager"""

    def __init__(self, config_file: Optional[str] = None):
        self.config_file = config_file or DEFAULT_CONFIG_FILE

        self.table = TableConfig()
        self.harness = HarnessConfig()
        self.analysis = AnalysisConfig()
        self.system = SystemConfig()

        self.load_config()

    def load_config(self):
        """Load configuration from the YAML file when present, then apply environment overrides"""
        if os.path.exists(self.config_file):
            try:
                with open(self.config_file, 'r') as f:
                    config_data = yaml.safe_load(f) or {}
            except (OSError, yaml.YAMLError) as e:
                raise ConfigError(f"cannot read {self.config_file}: {e}") from e
            self._update_from_dict(config_data)
            logger.info(f"Configuration loaded from {self.config_file}")

        load_dotenv()
        overridden = self._load_from_env()
        if overridden:
            logger.info(f"Configuration overridden from environment: {', '.join(overridden)}")

    def _update_from_dict(self, config_data: Dict[str, Any]):
        for section, data in config_data.items():
            if section in SECTIONS and isinstance(data, dict):
                section_obj = getattr(self, section)
                for key, value in data.items():
                    if hasattr(section_obj, key):
                        setattr(section_obj, key, value)
                    else:
                        logger.warning(f"Ignoring unknown configuration key {section}.{key}")
            else:
                logger.warning(f"Ignoring unknown configuration section '{section}'")

    def _load_from_env(self) -> List[str]:
        """Apply TWOBIN_<SECTION>_<KEY> variables, coerced to the field's type"""
        overridden = []
        for section in SECTIONS:
            section_obj = getattr(self, section)
            for f in fields(section_obj):
                name = f"{ENV_PREFIX}{section.upper()}_{f.name.upper()}"
                raw = os.getenv(name)
                if raw is None:
                    continue
                setattr(section_obj, f.name, _coerce(raw, type(getattr(section_obj, f.name)), name))
                overridden.append(name)
        return overridden

    def to_dict(self) -> Dict[str, Dict[str, Any]]:
        return {section: asdict(getattr(self, section)) for section in SECTIONS}

    def save_config(self, path: Optional[str] = None):
        """Save current configuration to file"""
        target = path or self.config_file
        with open(target, 'w') as f:
            yaml.safe_dump(self.to_dict(), f, default_flow_style=False, indent=2)
        logger.info(f"Configuration saved to {target}")

    def get_config(self, section: str) -> Any:
        """Get configuration section"""
        if section in SECTIONS:
            return getattr(self, section)
        raise ConfigError(f"Configuration section '{section}' not found")

    def update_config(self, section: str, key: str, value: Any):
        """Update specific configuration value"""
        section_obj = self.get_config(section)
        if not hasattr(section_obj, key):
            raise ConfigError(f"Configuration key '{key}' not found in section '{section}'")
        setattr(section_obj, key, value)
        logger.debug(f"Updated {section}.{key} = {value}")

    def validate_config(self) -> bool:
        """Validate current configuration, logging every problem found"""
        problems = self.problems()
        for problem in problems:
            logger.error(f"Invalid configuration: {problem}")
        return not problems

    def problems(self) -> List[str]:
        problems = []
        if self.table.capacity < 1:
            problems.append("table.capacity must be >= 1")
        if self.table.depth_slack < 0:
            problems.append("table.depth_slack must be >= 0")
        if self.table.node_factor < 1:
            problems.append("table.node_factor must be >= 1")
        if self.table.walk_step_factor < 0:
            problems.append("table.walk_step_factor must be >= 0")
        if self.harness.trials < 1:
            problems.append("harness.trials must be >= 1")
        if self.harness.n_jobs == 0:
            problems.append("harness.n_jobs must be non-zero")
        if self.harness.on_failure not in ("stop", "skip"):
            problems.append("harness.on_failure must be 'stop' or 'skip'")
        if self.harness.key_source not in ("sequential", "random-bytes"):
            problems.append("harness.key_source must be 'sequential' or 'random-bytes'")
        if self.analysis.grid_points < 1000:
            problems.append("analysis.grid_points must be >= 1000")
        if not 0 < self.analysis.converge_cutoff < 1:
            problems.append("analysis.converge_cutoff must lie in (0, 1)")
        if self.analysis.converge_iters < 1:
            problems.append("analysis.converge_iters must be >= 1")
        if self.system.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            problems.append(f"system.log_level '{self.system.log_level}' is not a logging level")
        return problems


def _coerce(raw: str, kind: type, name: str) -> Any:
    try:
        if kind is bool:
            return raw.strip().lower() in ("1", "true", "yes", "on")
        if kind is int:
            return int(raw)
        if kind is float:
            return float(raw)
        return raw
    except ValueError as e:
        raise ConfigError(f"{name}={raw!r} is not a valid {kind.__name__}") from e


_config: Optional[TwoBinConfig] = None


def get_config() -> TwoBinConfig:
    """Get global configuration instance, loading it on first use"""
    global _config
    if _config is None:
        _config = TwoBinConfig()
    return _config


def load_config(config_file: Optional[str] = None) -> TwoBinConfig:
    """Replace the global configuration with one loaded from config_file"""
    global _config
    _config = TwoBinConfig(config_file)
    return _config

