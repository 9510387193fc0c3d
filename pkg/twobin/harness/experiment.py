"""
Seeded experiment trials over (n, s, policy)
"""

import logging
import math
import time
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Iterator, List, Optional

import numpy as np

from ..error_handling import ConfigError, ErrorCategory, ErrorSeverity, InvariantViolation, handle_error
from ..logging import get_global_logger
from ..oracle.graph import MultiGraph
from ..oracle.kcore import core_size
from ..table.bucket_table import BucketTable
from ..table.hashing import Hasher, SeededHasher, derive_seeds
from ..table.policies import BfsPolicy, InsertPolicy
from ..table.records import InsertOutcome, InsertReceipt
from .report import CycleStats, Distribution, TrialReport

logger = logging.getLogger(__name__)

KEY_SOURCES = ("sequential", "random-bytes")
ON_FAILURE = ("stop", "skip")
RANDOM_KEY_BYTES = 16


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment; trial i runs with seed base_seed + i"""
    n: int
    s: Optional[float] = None
    m: Optional[int] = None
    capacity: int = 2
    policy: InsertPolicy = field(default_factory=BfsPolicy)
    trials: int = 10
    base_seed: int = 0
    key_source: str = "sequential"
    on_failure: str = "stop"
    probe_core: bool = False

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"n must be >= 1, got {self.n}")
        if (self.s is None) == (self.m is None):
            raise ConfigError("give exactly one of s and m")
        if self.s is not None and self.s < 0:
            raise ConfigError(f"s must be >= 0, got {self.s}")
        if self.m is not None and self.m < 0:
            raise ConfigError(f"m must be >= 0, got {self.m}")
        if self.capacity < 1:
            raise ConfigError(f"capacity must be >= 1, got {self.capacity}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if self.key_source not in KEY_SOURCES:
            raise ConfigError(f"key_source must be one of {KEY_SOURCES}")
        if self.on_failure not in ON_FAILURE:
            raise ConfigError(f"on_failure must be one of {ON_FAILURE}")

    @property
    def num_keys(self) -> int:
        """m, or floor(s * n / 2)"""
        return self.m if self.m is not None else int(math.floor(self.s * self.n / 2))

    def seeds(self) -> List[int]:
        return [self.base_seed + i for i in range(self.trials)]

    def with_policy(self, policy: InsertPolicy) -> "ExperimentConfig":
        return replace(self, policy=policy)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "s": self.s,
            "m": self.num_keys,
            "capacity": self.capacity,
            "policy": self.policy.label,
            "trials": self.trials,
            "base_seed": self.base_seed,
            "key_source": self.key_source,
            "on_failure": self.on_failure,
            "probe_core": self.probe_core,
        }


def key_stream(config: ExperimentConfig, seed: int, count: Optional[int] = None) -> Iterator[bytes]:
    """Keys for one trial: 64-bit counters, or random bytes drawn from the seed"""
    count = config.num_keys if count is None else count
    if config.key_source == "sequential":
        for i in range(count):
            yield i.to_bytes(8, "little")
    else:
        rng = np.random.default_rng([seed, 1])
        for _ in range(count):
            yield rng.bytes(RANDOM_KEY_BYTES)


def trial_hasher(config: ExperimentConfig, seed: int, hasher: Optional[Hasher] = None) -> Hasher:
    return hasher if hasher is not None else SeededHasher(derive_seeds(seed))


def new_table(config: ExperimentConfig, seed: int, hasher: Optional[Hasher] = None) -> BucketTable:
    return BucketTable(config.n, config.capacity, seeds=derive_seeds(seed),
                       hasher=trial_hasher(config, seed, hasher), rng_seed=seed)


def trial_graph(config: ExperimentConfig, seed: int, hasher: Optional[Hasher] = None) -> MultiGraph:
    """Bucket graph of the full key stream of a trial, whether or not it fits"""
    h = trial_hasher(config, seed, hasher)
    pairs = (h(key, config.n) for key in key_stream(config, seed))
    return MultiGraph(config.n, tuple((p.b1, p.b2) for p in pairs))


class ReceiptLog:
    """Collects per-insert receipts of one trial"""

    def __init__(self):
        self.moves: List[int] = []
        self.nodes: List[int] = []
        self.depth: List[int] = []
        self.terminal: List[int] = []
        self.cycles: List[int] = []
        self.stuck = 0
        self.duplicates = 0

    def add(self, receipt: InsertReceipt):
        if receipt.outcome is InsertOutcome.DUPLICATE_KEY_UPDATED:
            self.duplicates += 1
            return
        self.moves.append(receipt.moves)
        self.nodes.append(receipt.nodes_explored)
        self.depth.append(receipt.depth)
        self.cycles.append(receipt.cycle_edges_seen)
        if receipt.terminal_load is not None and receipt.placed:
            self.terminal.append(receipt.terminal_load)
        self.stuck += int(receipt.stuck)

    def fill(self, report: TrialReport):
        report.moves = Distribution.of(self.moves)
        report.nodes_explored = Distribution.of(self.nodes)
        report.depth = Distribution.of(self.depth)
        report.terminal_load = Distribution.of(self.terminal)
        report.cycle_edges_seen = CycleStats(int(sum(self.cycles)), max(self.cycles, default=0))
        report.stuck_events = self.stuck
        report.duplicates = self.duplicates


def run_trial(config: ExperimentConfig, seed: int, hasher: Optional[Hasher] = None) -> TrialReport:
    """Fresh table, insert the trial's key stream, collect receipts.

    Insert failures are data: with on_failure="stop" the trial ends at the first
    one, with "skip" the key is dropped and the stream continues.
    """
    table = new_table(config, seed, hasher)
    report = TrialReport(seed=seed, policy=config.policy.label, n=config.n,
                         capacity=config.capacity, requested=config.num_keys)
    receipts = ReceiptLog()
    started = time.perf_counter()

    for index, key in enumerate(key_stream(config, seed)):
        receipt = table.insert(key, key, config.policy)
        receipts.add(receipt)
        if receipt.failed:
            report.failures += 1
            if report.first_failure_at is None:
                report.first_failure_at = index
                report.utilization_at_first_failure = table.utilization
            if config.on_failure == "stop":
                break

    report.wall_time = time.perf_counter() - started
    receipts.fill(report)
    report.inserted = table.count
    report.max_load = table.max_load()
    report.utilization = table.utilization
    report.load_histogram = table.load_histogram()

    violations = table.check_invariants()
    if violations:
        report.invariant_violations = len(violations)
        handle_error(InvariantViolation(violations), context=f"run_trial seed={seed}",
                     category=ErrorCategory.TABLE, severity=ErrorSeverity.CRITICAL)

    if config.probe_core:
        report.core3_size = core_size(trial_graph(config, seed, hasher), 3)

    events = get_global_logger()
    if events is not None:
        events.log_trial_event(seed, "completed", {
            "policy": report.policy, "inserted": report.inserted,
            "failures": report.failures, "max_load": report.max_load,
        })
    return report


def run_fill_to_failure(config: ExperimentConfig, seed: int, hasher: Optional[Hasher] = None) -> float:
    """Insert keys until the first failure; stored / (B * n)"""
    if not isinstance(config.policy, BfsPolicy):
        raise ConfigError(f"fill-to-failure needs a bfs policy, got {config.policy.label}")
    table = new_table(config, seed, hasher)
    for key in key_stream(config, seed, count=config.capacity * config.n + 1):
        if table.insert(key, key, config.policy).failed:
            break
    logger.debug(f"Fill seed={seed} stopped at {table.count} records, utilization {table.utilization:.4f}")
    return table.utilization
