"""
Exhaustive oracles for small graphs
"""

from itertools import combinations

import numpy as np

from ..error_handling import OracleInputError
from .graph import MultiGraph

MAX_BRUTE_EDGES = 20
MAX_SUBSET_VERTICES = 16


def brute_force_feasible(g: MultiGraph, capacity: int) -> bool:
    """Search all 2^m orientations for one with in-degree <= capacity.

    Backtracking prunes partial assignments that already overflow a vertex, so
    the answer equals plain enumeration.
    """
    if g.m > MAX_BRUTE_EDGES:
        raise OracleInputError(f"brute force accepts at most {MAX_BRUTE_EDGES} edges, got {g.m}")
    if capacity < 1:
        raise OracleInputError(f"capacity must be >= 1, got {capacity}")
    load = np.zeros(g.n, dtype=np.int64)

    def place(i: int) -> bool:
        if i == g.m:
            return True
        u, v = g.edges[i]
        for head in ((u,) if u == v else (u, v)):
            if load[head] < capacity:
                load[head] += 1
                if place(i + 1):
                    return True
                load[head] -= 1
        return False

    return place(0)


def subset_density_exceeds(g: MultiGraph, threshold: int = 2) -> bool:
    """Direct check over every non-empty vertex subset"""
    if g.n > MAX_SUBSET_VERTICES:
        raise OracleInputError(f"subset enumeration accepts at most {MAX_SUBSET_VERTICES} vertices, got {g.n}")
    touched = sorted({w for edge in g.edges for w in edge})
    # isolated vertices only lower density
    for size in range(1, len(touched) + 1):
        for subset in combinations(touched, size):
            if g.subgraph_edge_count(subset) > threshold * size:
                return True
    return False
