"""
Two-choice bucket table.

n buckets of capacity B; every key lives in one of its two hashed buckets.
Lookups read at most those two buckets. Inserts relocate records along an
eviction path found by the configured policy.
"""

import json
import logging
from collections import Counter
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

from ..error_handling import InvariantViolation, ReportWriteError, TwoBinError
from .hashing import BucketPair, Hasher, KeyLike, Seeds, SeededHasher, derive_seeds, to_key_bytes
from .policies import BfsPolicy, DepthLimitedPolicy, InsertPolicy, RandomWalkPolicy
from .records import InsertOutcome, InsertReceipt, ItemRecord, SearchResult
from .search import apply_move_path, find_eviction_path_bfs, find_least_loaded_path
from .walk import insert_random_walk

logger = logging.getLogger(__name__)

SNAPSHOT_SCHEMA_VERSION = 1


class BucketTable:
    """Fixed array of n buckets holding at most `capacity` records each.

    Single writer: mutations need exclusive access; concurrent lookups are fine.
    """

    def __init__(self, n: int, capacity: int = 2, seeds: Optional[Seeds] = None,
                 hasher: Optional[Hasher] = None, rng_seed: Optional[int] = None):
        if n < 1:
            raise TwoBinError(f"bucket count must be >= 1, got {n}")
        if capacity < 1:
            raise TwoBinError(f"capacity must be >= 1, got {capacity}")
        self.n = n
        self.capacity = capacity
        self.seeds: Seeds = seeds if seeds is not None else derive_seeds(rng_seed or 0)
        self.hasher: Hasher = hasher if hasher is not None else SeededHasher(self.seeds)
        self.rng = np.random.default_rng(rng_seed)
        self.buckets: List[List[ItemRecord]] = [[] for _ in range(n)]
        self.count = 0

    def __len__(self) -> int:
        return self.count

    def __contains__(self, key: KeyLike) -> bool:
        return self.lookup(key) is not None

    def __iter__(self) -> Iterator[ItemRecord]:
        for bucket in self.buckets:
            yield from bucket

    def __repr__(self):
        return f"BucketTable(n={self.n}, capacity={self.capacity}, count={self.count})"

    @property
    def average_degree(self) -> float:
        """s = 2m/n"""
        return 2 * self.count / self.n

    @property
    def utilization(self) -> float:
        return self.count / (self.capacity * self.n)

    def pair_for(self, key: KeyLike) -> BucketPair:
        return self.hasher(to_key_bytes(key), self.n)

    def load(self, bucket: int) -> int:
        return len(self.buckets[bucket])

    def loads(self) -> np.ndarray:
        return np.fromiter((len(b) for b in self.buckets), dtype=np.int64, count=self.n)

    def max_load(self) -> int:
        return max((len(b) for b in self.buckets), default=0)

    def load_histogram(self) -> Dict[int, int]:
        """Map load value -> number of buckets with that load"""
        return dict(sorted(Counter(len(b) for b in self.buckets).items()))

    def _locate(self, key: bytes, pair: BucketPair) -> Optional[Tuple[int, int]]:
        for b in pair.distinct():
            for slot, record in enumerate(self.buckets[b]):
                if record.key == key:
                    return b, slot
        return None

    def lookup(self, key: KeyLike) -> Optional[bytes]:
        """Value stored under key, reading only its two candidate buckets"""
        key = to_key_bytes(key)
        pair = self.hasher(key, self.n)
        for b in pair.distinct():
            for record in self.buckets[b]:
                if record.key == key:
                    return record.value
        return None

    def insert(self, key: KeyLike, value: KeyLike = b"",
               policy: Optional[InsertPolicy] = None) -> InsertReceipt:
        """Insert or update key; failures leave the table unchanged"""
        policy = policy if policy is not None else BfsPolicy()
        key = to_key_bytes(key)
        value = to_key_bytes(value)
        pair = self.hasher(key, self.n)

        found = self._locate(key, pair)
        if found is not None:
            bucket, slot = found
            self.buckets[bucket][slot].value = value
            return InsertReceipt(InsertOutcome.DUPLICATE_KEY_UPDATED, placed_in=bucket)

        record = ItemRecord(key, value, pair)
        if isinstance(policy, RandomWalkPolicy):
            receipt = insert_random_walk(self, record, policy.steps(self.n), self.rng)
        elif isinstance(policy, BfsPolicy):
            max_depth, max_nodes = policy.caps(self.n)
            receipt = self._place(record, find_eviction_path_bfs(self, pair.b1, pair.b2, max_depth, max_nodes))
        elif isinstance(policy, DepthLimitedPolicy):
            h, max_nodes = policy.caps(self.n)
            receipt = self._place(record, find_least_loaded_path(self, pair.b1, pair.b2, h, max_nodes))
        else:
            raise TwoBinError(f"unsupported insert policy {policy!r}")

        if receipt.placed:
            self.count += 1
        else:
            logger.debug(f"Insert failed for key {key.hex()} under {policy.label}: "
                         f"explored={receipt.nodes_explored} stuck={receipt.stuck}")
        return receipt

    def _place(self, record: ItemRecord, result: SearchResult) -> InsertReceipt:
        stats = result.stats
        if not result.found:
            return InsertReceipt(
                InsertOutcome.TABLE_FULL_FAILURE,
                depth=stats.deepest,
                nodes_explored=stats.nodes_explored,
                cycle_edges_seen=stats.cycle_edges_seen,
                stuck=stats.stuck,
                terminal_load=result.terminal_load,
            )
        moves = apply_move_path(self, result.path)
        start = self.buckets[result.path.start]
        if len(start) >= self.capacity:
            raise InvariantViolation([f"bucket {result.path.start} still full after moves"])
        start.append(record)
        return InsertReceipt(
            InsertOutcome.PLACED,
            moves=moves,
            depth=len(result.path),
            nodes_explored=stats.nodes_explored,
            cycle_edges_seen=stats.cycle_edges_seen,
            placed_in=result.path.start,
            terminal_load=result.terminal_load,
        )

    def remove(self, key: KeyLike) -> bool:
        """Delete key if present; no relocation"""
        key = to_key_bytes(key)
        found = self._locate(key, self.hasher(key, self.n))
        if found is None:
            return False
        bucket, slot = found
        del self.buckets[bucket][slot]
        self.count -= 1
        return True

    def check_invariants(self) -> List[str]:
        """Placement, capacity, count and key uniqueness violations (empty when sound)"""
        violations = []
        seen = set()
        total = 0
        for b, bucket in enumerate(self.buckets):
            total += len(bucket)
            if len(bucket) > self.capacity:
                violations.append(f"bucket {b} holds {len(bucket)} > {self.capacity}")
            for record in bucket:
                if b not in record.pair:
                    violations.append(f"key {record.key.hex()} stored in {b}, outside {record.pair}")
                expected = self.hasher(record.key, self.n)
                if expected != record.pair:
                    violations.append(f"key {record.key.hex()} carries {record.pair}, hashes to {expected}")
                if record.key in seen:
                    violations.append(f"key {record.key.hex()} stored twice")
                seen.add(record.key)
        if total != self.count:
            violations.append(f"count {self.count} != stored records {total}")
        return violations

    def assert_invariants(self):
        violations = self.check_invariants()
        if violations:
            raise InvariantViolation(violations)

    def rehash(self, seeds: Seeds, policy: Optional[InsertPolicy] = None) -> bool:
        """Reinsert everything under new seeds; on any failure nothing changes"""
        fresh = BucketTable(self.n, self.capacity, seeds=seeds)
        fresh.rng = self.rng
        for record in self:
            if not fresh.insert(record.key, record.value, policy).placed:
                logger.warning(f"Rehash with seeds {seeds} failed at {fresh.count}/{self.count} records")
                return False
        self.seeds, self.hasher = fresh.seeds, fresh.hasher
        self.buckets, self.count = fresh.buckets, fresh.count
        logger.info(f"Rehashed {self.count} records with seeds {seeds}")
        return True

    def to_snapshot(self) -> Dict[str, Any]:
        return {
            "schema_version": SNAPSHOT_SCHEMA_VERSION,
            "n": self.n,
            "capacity": self.capacity,
            "seeds": list(self.seeds),
            "items": [
                {"key": r.key.hex(), "value": r.value.hex(), "b1": r.pair.b1, "b2": r.pair.b2, "bucket": b}
                for b, bucket in enumerate(self.buckets)
                for r in bucket
            ],
        }

    @classmethod
    def from_snapshot(cls, data: Dict[str, Any], hasher: Optional[Hasher] = None,
                      rng_seed: Optional[int] = None) -> "BucketTable":
        """Rebuild a table slot for slot; the result is checked against its hasher"""
        version = data.get("schema_version")
        if version != SNAPSHOT_SCHEMA_VERSION:
            raise TwoBinError(f"unsupported snapshot schema_version {version}")
        table = cls(int(data["n"]), int(data["capacity"]), seeds=tuple(data["seeds"]),
                    hasher=hasher, rng_seed=rng_seed)
        for item in data["items"]:
            record = ItemRecord(bytes.fromhex(item["key"]), bytes.fromhex(item["value"]),
                                BucketPair(int(item["b1"]), int(item["b2"])))
            table.buckets[int(item["bucket"])].append(record)
            table.count += 1
        table.assert_invariants()
        return table

    def save_snapshot(self, path) -> Path:
        path = Path(path)
        try:
            path.write_text(json.dumps(self.to_snapshot(), indent=2))
        except OSError as e:
            raise ReportWriteError(str(path), e) from e
        return path

    @classmethod
    def load_snapshot(cls, path, hasher: Optional[Hasher] = None) -> "BucketTable":
        return cls.from_snapshot(json.loads(Path(path).read_text()), hasher=hasher)
