"""
Online insertion versus offline orientability on small random instances
"""

import logging
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List

import numpy as np

from ..logging import get_global_logger
from ..oracle.brute import brute_force_feasible
from ..oracle.flow import orientation_feasible
from ..oracle.graph import MultiGraph, random_multigraph
from ..table.bucket_table import BucketTable
from ..table.hashing import FixedHasher, to_key_bytes
from ..table.policies import unbounded_bfs

logger = logging.getLogger(__name__)


@dataclass
class InstanceResult:
    n: int
    m: int
    online: bool
    brute: bool
    flow: bool
    witness_valid: bool = True

    @property
    def agrees(self) -> bool:
        return self.online == self.brute == self.flow and self.witness_valid


@dataclass
class OracleCheckReport:
    instances: int = 0
    feasible: int = 0
    disagreements: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.disagreements

    def to_dict(self) -> Dict[str, Any]:
        return {**asdict(self), "passed": self.passed}


def insert_all_online(g: MultiGraph, capacity: int = 2) -> bool:
    """Insert edge i as key i with unbounded BFS; True iff every insert lands"""
    if g.n == 0:
        return g.m == 0
    table = BucketTable(g.n, capacity, hasher=FixedHasher.from_edges(g.edges))
    policy = unbounded_bfs()
    for i in range(g.m):
        if not table.insert(to_key_bytes(i), b"", policy).placed:
            return False
    table.assert_invariants()
    return True


def check_instance(g: MultiGraph, capacity: int = 2) -> InstanceResult:
    witness = orientation_feasible(g, capacity)
    return InstanceResult(
        n=g.n,
        m=g.m,
        online=insert_all_online(g, capacity),
        brute=brute_force_feasible(g, capacity),
        flow=witness is not None,
        witness_valid=witness is None or witness.is_valid(g, capacity),
    )


def oracle_check(instances: int = 10_000, max_n: int = 8, max_m: int = 16, seed: int = 0,
                 capacity: int = 2) -> OracleCheckReport:
    """Compare both oracles with online insertion on random small bucket graphs"""
    report = OracleCheckReport()
    for i in range(instances):
        rng = np.random.default_rng([seed, i])
        n = int(rng.integers(1, max_n + 1))
        m = int(rng.integers(0, max_m + 1))
        g = random_multigraph(n, m, rng)
        result = check_instance(g, capacity)
        report.instances += 1
        report.feasible += int(result.flow)
        if not result.agrees:
            report.disagreements.append({"instance": i, "edges": [list(e) for e in g.edges], **asdict(result)})
            logger.error(f"Oracle disagreement on instance {i}: {asdict(result)}")

    events = get_global_logger()
    if events is not None:
        events.log_oracle_event("oracle_check.finished", {
            "instances": report.instances, "feasible": report.feasible,
            "disagreements": len(report.disagreements),
        })
    return report
