"""
k-core peeling
"""

from collections import deque
from typing import Iterable, Optional, Set

from ..error_handling import OracleInputError
from .graph import MultiGraph


def peel_k_core(g: MultiGraph, k: int, order: Optional[Iterable[int]] = None) -> Set[int]:
    """Vertices of the maximal subgraph with minimum degree >= k.

    Self-loops count 2 toward degree. `order` must be a permutation of
    range(n); it only changes which low-degree vertex is deleted first, and the
    core is the same for every order.
    """
    if k < 1:
        raise OracleInputError(f"k must be >= 1, got {k}")
    degree = g.degrees()
    incident = g.adjacency()
    alive = [True] * g.n
    dead_edge = [False] * g.m

    seed_order = range(g.n) if order is None else list(order)
    if order is not None and sorted(seed_order) != list(range(g.n)):
        raise OracleInputError(f"order must be a permutation of range({g.n})")
    queue = deque(v for v in seed_order if degree[v] < k)
    queued = set(queue)

    while queue:
        v = queue.popleft()
        alive[v] = False
        for e in incident[v]:
            if dead_edge[e]:
                continue
            dead_edge[e] = True
            a, b = g.edges[e]
            for w in (a, b):
                degree[w] -= 1
                if alive[w] and w not in queued and degree[w] < k:
                    queue.append(w)
                    queued.add(w)

    return {v for v in range(g.n) if alive[v]}


def core_size(g: MultiGraph, k: int = 3) -> int:
    return len(peel_k_core(g, k))
