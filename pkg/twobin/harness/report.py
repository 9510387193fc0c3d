"""
Trial and run reports with a versioned JSON/CSV schema
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..error_handling import ConfigError, ReportWriteError

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
FORMATS = ("json", "csv")


def _int_keys(histogram: Dict[Any, Any]) -> Dict[int, int]:
    return {int(k): int(v) for k, v in sorted(histogram.items(), key=lambda kv: int(kv[0]))}


@dataclass
class Distribution:
    """mean / max / histogram of one per-insert quantity"""
    mean: float = 0.0
    max: int = 0
    histogram: Dict[int, int] = field(default_factory=dict)

    @classmethod
    def of(cls, values) -> "Distribution":
        values = np.asarray(values, dtype=np.int64)
        if values.size == 0:
            return cls()
        uniq, counts = np.unique(values, return_counts=True)
        return cls(float(values.mean()), int(values.max()),
                   {int(u): int(c) for u, c in zip(uniq, counts)})

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Distribution":
        return cls(float(data["mean"]), int(data["max"]), _int_keys(data.get("histogram", {})))


@dataclass
class CycleStats:
    total: int = 0
    max: int = 0


@dataclass
class TrialReport:
    """Everything measured in one seeded trial"""
    seed: int = 0
    policy: str = ""
    n: int = 0
    capacity: int = 0
    requested: int = 0
    inserted: int = 0
    failures: int = 0
    duplicates: int = 0
    first_failure_at: Optional[int] = None
    max_load: int = 0
    utilization: float = 0.0
    utilization_at_first_failure: Optional[float] = None
    load_histogram: Dict[int, int] = field(default_factory=dict)
    moves: Distribution = field(default_factory=Distribution)
    nodes_explored: Distribution = field(default_factory=Distribution)
    depth: Distribution = field(default_factory=Distribution)
    terminal_load: Distribution = field(default_factory=Distribution)
    cycle_edges_seen: CycleStats = field(default_factory=CycleStats)
    stuck_events: int = 0
    invariant_violations: int = 0
    core3_size: Optional[int] = None
    wall_time: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["load_histogram"] = {str(k): v for k, v in self.load_histogram.items()}
        for name in ("moves", "nodes_explored", "depth", "terminal_load"):
            data[name]["histogram"] = {str(k): v for k, v in data[name]["histogram"].items()}
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "TrialReport":
        data = dict(data)
        data["load_histogram"] = _int_keys(data.get("load_histogram", {}))
        for name in ("moves", "nodes_explored", "depth", "terminal_load"):
            data[name] = Distribution.from_dict(data[name])
        data["cycle_edges_seen"] = CycleStats(**data["cycle_edges_seen"])
        return cls(**data)

    def deterministic_dict(self) -> Dict[str, Any]:
        """to_dict without wall_time"""
        data = self.to_dict()
        data.pop("wall_time")
        return data


def summarize(trials: List[TrialReport]) -> Dict[str, Any]:
    """Run-level aggregates, fixed in trial order"""
    if not trials:
        return {"trials": 0}
    return {
        "trials": len(trials),
        "trials_with_failure": sum(1 for t in trials if t.failures),
        "failures": sum(t.failures for t in trials),
        "max_load": max(t.max_load for t in trials),
        "mean_utilization": float(np.mean([t.utilization for t in trials])),
        "mean_nodes_explored": float(np.mean([t.nodes_explored.mean for t in trials])),
        "max_nodes_explored": max(t.nodes_explored.max for t in trials),
        "max_moves": max(t.moves.max for t in trials),
        "max_depth": max(t.depth.max for t in trials),
        "stuck_events": sum(t.stuck_events for t in trials),
        "max_cycle_edges": max(t.cycle_edges_seen.max for t in trials),
        "invariant_violations": sum(t.invariant_violations for t in trials),
    }


@dataclass
class RunReport:
    config: Dict[str, Any]
    trials: List[TrialReport] = field(default_factory=list)
    summary: Dict[str, Any] = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        if not self.summary:
            self.summary = summarize(self.trials)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": self.schema_version,
            "config": self.config,
            "summary": self.summary,
            "trials": [t.to_dict() for t in self.trials],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunReport":
        version = data.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ConfigError(f"unsupported report schema_version {version}")
        return cls(
            config=data["config"],
            trials=[TrialReport.from_dict(t) for t in data["trials"]],
            summary=data["summary"],
            schema_version=version,
        )

    def to_frame(self) -> pd.DataFrame:
        """One row per trial; nested fields and histograms become dotted columns"""
        frame = pd.json_normalize([t.to_dict() for t in self.trials], sep=".")
        frame.insert(0, "schema_version", self.schema_version)
        return frame


def write_json(payload: Dict[str, Any], path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, default=str))
    except OSError as e:
        raise ReportWriteError(path, e) from e
    return path


def emit_report(report: RunReport, fmt: str, path) -> Path:
    """Write report as json or csv"""
    if fmt not in FORMATS:
        raise ConfigError(f"unknown report format '{fmt}', expected one of {FORMATS}")
    path = Path(path)
    if fmt == "json":
        write_json(report.to_dict(), path)
    else:
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            report.to_frame().to_csv(path, index=False)
        except OSError as e:
            raise ReportWriteError(path, e) from e
    logger.info(f"Report with {len(report.trials)} trial(s) written to {path}")
    return path


def load_report(path) -> RunReport:
    return RunReport.from_dict(json.loads(Path(path).read_text()))
