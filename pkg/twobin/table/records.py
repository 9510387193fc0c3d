"""
Stored records, eviction paths and per-insert receipts
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

from .hashing import BucketPair


@dataclass
class ItemRecord:
    """A stored key/value with its two candidate buckets"""
    key: bytes
    value: bytes
    pair: BucketPair


class InsertOutcome(Enum):
    PLACED = "placed"
    TABLE_FULL_FAILURE = "table_full_failure"
    DUPLICATE_KEY_UPDATED = "duplicate_key_updated"


@dataclass(frozen=True)
class Hop:
    """Move the record at buckets[bucket][slot] to its alternate bucket `target`"""
    bucket: int
    slot: int
    target: int


@dataclass(frozen=True)
class EvictionPath:
    """Hops from a start bucket to the bucket that absorbs the extra load"""
    start: int
    hops: Tuple[Hop, ...] = ()

    @property
    def terminal(self) -> int:
        return self.hops[-1].target if self.hops else self.start

    def __len__(self) -> int:
        return len(self.hops)


@dataclass
class SearchStats:
    nodes_explored: int = 0
    cycle_edges_seen: int = 0
    stuck: bool = False
    truncated: bool = False     # a successor was dropped by the depth cap
    deepest: int = 0


@dataclass
class SearchResult:
    path: Optional[EvictionPath]
    stats: SearchStats = field(default_factory=SearchStats)
    terminal_load: Optional[int] = None

    @property
    def found(self) -> bool:
        return self.path is not None


@dataclass
class InsertReceipt:
    """Instrumentation for one insert"""
    outcome: InsertOutcome
    moves: int = 0
    depth: int = 0
    nodes_explored: int = 0
    cycle_edges_seen: int = 0
    stuck: bool = False
    placed_in: Optional[int] = None
    terminal_load: Optional[int] = None

    @property
    def placed(self) -> bool:
        return self.outcome is InsertOutcome.PLACED

    @property
    def failed(self) -> bool:
        return self.outcome is InsertOutcome.TABLE_FULL_FAILURE


def moved_records(before: List[List[ItemRecord]], after: List[List[ItemRecord]]) -> int:
    """Number of keys present in both snapshots whose bucket differs"""
    where_before = {rec.key: b for b, bucket in enumerate(before) for rec in bucket}
    return sum(
        1
        for b, bucket in enumerate(after)
        for rec in bucket
        if rec.key in where_before and where_before[rec.key] != b
    )
