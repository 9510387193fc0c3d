"""
Backward search over the eviction relation and path application.

From a bucket U the successors are the alternate buckets of the records stored
in U: moving one of those records out frees a slot in U.
"""

import logging
import math
from collections import deque
from typing import Deque, Dict, List, Optional, Tuple

from ..error_handling import CapacityInvariantError, StalePathError
from .records import EvictionPath, Hop, SearchResult, SearchStats

logger = logging.getLogger(__name__)

Parents = Dict[int, Tuple[int, int]]


def _seed_frontier(start1: int, start2: int) -> Tuple[Deque[int], Dict[int, int]]:
    starts = [start1] if start1 == start2 else [start1, start2]
    return deque(starts), {b: 0 for b in starts}


def _path_to(bucket: int, parents: Parents) -> EvictionPath:
    hops: List[Hop] = []
    while bucket in parents:
        source, slot = parents[bucket]
        hops.append(Hop(bucket=source, slot=slot, target=bucket))
        bucket = source
    hops.reverse()
    return EvictionPath(start=bucket, hops=tuple(hops))


def _expand(table, u: int, depth: Dict[int, int], parents: Parents,
            frontier: Deque[int], stats: SearchStats):
    for slot, record in enumerate(table.buckets[u]):
        v = record.pair.other(u)
        if v in depth:
            stats.cycle_edges_seen += 1
            continue
        depth[v] = depth[u] + 1
        parents[v] = (u, slot)
        frontier.append(v)


def find_eviction_path_bfs(table, start1: int, start2: int,
                           max_depth: float = math.inf,
                           max_nodes: float = math.inf) -> SearchResult:
    """Shortest path from either start bucket to the first bucket with a free slot.

    Both start frontiers are interleaved in one FIFO queue and every bucket is
    tested for a free slot when it is discovered, so the first hit is at minimum
    depth (ties go to discovery order). nodes_explored counts dequeued buckets
    plus the absorbing one; a hit that would exceed max_nodes is not taken.
    """
    frontier, depth = _seed_frontier(start1, start2)
    parents: Parents = {}
    stats = SearchStats()

    for start in frontier:
        load = len(table.buckets[start])
        if load < table.capacity:
            stats.nodes_explored = 1
            return SearchResult(EvictionPath(start=start), stats, terminal_load=load)

    exhausted = False
    while frontier and not exhausted:
        if stats.nodes_explored >= max_nodes:
            exhausted = True
            break
        u = frontier.popleft()
        stats.nodes_explored += 1
        stats.deepest = max(stats.deepest, depth[u])
        if depth[u] >= max_depth:
            stats.truncated = True
            continue
        for slot, record in enumerate(table.buckets[u]):
            v = record.pair.other(u)
            if v in depth:
                stats.cycle_edges_seen += 1
                continue
            depth[v] = depth[u] + 1
            parents[v] = (u, slot)
            load = len(table.buckets[v])
            if load < table.capacity:
                if stats.nodes_explored + 1 > max_nodes:
                    exhausted = True
                    break
                stats.nodes_explored += 1
                return SearchResult(_path_to(v, parents), stats, terminal_load=load)
            frontier.append(v)

    stats.stuck = not frontier and not stats.truncated and not exhausted
    return SearchResult(None, stats)


def find_least_loaded_path(table, start1: int, start2: int, h: int,
                           max_nodes: float = math.inf) -> SearchResult:
    """Path to the least loaded bucket within depth h of either start.

    Ties go to the earliest discovered bucket. A path is returned only when that
    bucket has a free slot; terminal_load is reported either way.
    """
    frontier, depth = _seed_frontier(start1, start2)
    parents: Parents = {}
    stats = SearchStats()
    best, best_load = None, math.inf

    while frontier and stats.nodes_explored < max_nodes:
        u = frontier.popleft()
        stats.nodes_explored += 1
        stats.deepest = max(stats.deepest, depth[u])
        load = len(table.buckets[u])
        if load < best_load:
            best, best_load = u, load
            if load == 0:
                break
        if depth[u] >= h:
            if table.buckets[u]:
                stats.truncated = True
            continue
        _expand(table, u, depth, parents, frontier, stats)

    if best is not None and best_load < table.capacity:
        return SearchResult(_path_to(best, parents), stats, terminal_load=best_load)
    stats.stuck = not frontier and not stats.truncated
    return SearchResult(None, stats, terminal_load=None if best is None else best_load)


def validate_path(table, path: EvictionPath):
    """Raise StalePathError unless every hop matches the current table state"""
    expected = path.start
    seen = {path.start}
    for hop in path.hops:
        if hop.bucket != expected:
            raise StalePathError(f"hop starts at bucket {hop.bucket}, expected {expected}")
        bucket = table.buckets[hop.bucket]
        if not 0 <= hop.slot < len(bucket):
            raise StalePathError(f"bucket {hop.bucket} has no slot {hop.slot}")
        record = bucket[hop.slot]
        if hop.target not in record.pair or record.pair.other(hop.bucket) != hop.target:
            raise StalePathError(
                f"record in bucket {hop.bucket} slot {hop.slot} cannot move to {hop.target}")
        if hop.target in seen:
            raise StalePathError(f"bucket {hop.target} appears twice on the path")
        seen.add(hop.target)
        expected = hop.target
    if path.hops and len(table.buckets[path.terminal]) >= table.capacity:
        raise StalePathError(f"terminal bucket {path.terminal} is full")


def apply_move_path(table, path: EvictionPath) -> int:
    """Relocate records along path, far end first; returns the number of moves.

    Afterwards the start bucket has one slot fewer occupied and the terminal one
    more; no bucket exceeds capacity at any step.
    """
    validate_path(table, path)
    for hop in reversed(path.hops):
        target = table.buckets[hop.target]
        if len(target) >= table.capacity:
            raise CapacityInvariantError(f"move into full bucket {hop.target}")
        target.append(table.buckets[hop.bucket].pop(hop.slot))
    if path.hops:
        logger.debug(f"Applied {len(path.hops)} moves from bucket {path.start} to {path.terminal}")
    return len(path.hops)
