"""
Random-walk insertion with undo-log rollback
"""

import logging
from typing import Dict, List, Tuple

import numpy as np

from .records import InsertOutcome, InsertReceipt, ItemRecord

logger = logging.getLogger(__name__)


def insert_random_walk(table, record: ItemRecord, max_steps: int,
                       rng: np.random.Generator) -> InsertReceipt:
    """Place record, evicting uniformly chosen victims for at most max_steps steps.

    Each evicted record walks to its alternate bucket. When the budget runs out
    the undo log restores every bucket slot for slot. The caller owns `count`.
    """
    b1, b2 = record.pair.b1, record.pair.b2
    buckets = table.buckets
    free = [b for b in record.pair.distinct() if len(buckets[b]) < table.capacity]
    if free:
        target = min(free, key=lambda b: len(buckets[b]))
        terminal_load = len(buckets[target])
        buckets[target].append(record)
        return InsertReceipt(InsertOutcome.PLACED, nodes_explored=len(record.pair.distinct()),
                             placed_in=target, terminal_load=terminal_load)

    target = b1 if b1 == b2 else (b1, b2)[int(rng.integers(2))]
    undo: List[Tuple[int, int, ItemRecord]] = []
    origin: Dict[bytes, int] = {}
    location: Dict[bytes, int] = {record.key: target}
    visited = {b1, b2}
    cycle_edges = 0
    walker = record

    while len(undo) < max_steps:
        slot = int(rng.integers(len(buckets[target])))
        victim = buckets[target][slot]
        buckets[target][slot] = walker
        undo.append((target, slot, victim))
        location[walker.key] = target

        nxt = victim.pair.other(target)
        origin.setdefault(victim.key, target)
        location[victim.key] = nxt
        if nxt in visited:
            cycle_edges += 1
        visited.add(nxt)

        if len(buckets[nxt]) < table.capacity:
            terminal_load = len(buckets[nxt])
            buckets[nxt].append(victim)
            moves = sum(1 for key, b in origin.items() if key != record.key and location[key] != b)
            return InsertReceipt(
                InsertOutcome.PLACED,
                moves=moves,
                depth=len(undo),
                nodes_explored=len(visited),
                cycle_edges_seen=cycle_edges,
                placed_in=location[record.key],
                terminal_load=terminal_load,
            )
        walker, target = victim, nxt

    for bucket, slot, victim in reversed(undo):
        buckets[bucket][slot] = victim
    logger.debug(f"Random walk gave up after {len(undo)} steps for key {record.key.hex()}")
    return InsertReceipt(
        InsertOutcome.TABLE_FULL_FAILURE,
        depth=len(undo),
        nodes_explored=len(visited),
        cycle_edges_seen=cycle_edges,
    )
