"""
Capacity-c orientability by maximum flow.

Network: source -> edge node (cap 1) -> each endpoint vertex node (cap 1)
-> sink (cap c). The graph is orientable iff the max flow saturates every edge node.
"""

import logging
from typing import Optional

import networkx as nx

from ..error_handling import InvariantViolation, OracleInputError
from .graph import MultiGraph, Orientation

logger = logging.getLogger(__name__)

SOURCE = "s"
SINK = "t"


def build_network(g: MultiGraph, capacity: int) -> nx.DiGraph:
    net = nx.DiGraph()
    net.add_node(SOURCE)
    net.add_node(SINK)
    for i, (u, v) in enumerate(g.edges):
        net.add_edge(SOURCE, ("e", i), capacity=1)
        # a self-loop has a single arc: it takes one slot of its vertex
        net.add_edge(("e", i), ("v", u), capacity=1)
        net.add_edge(("e", i), ("v", v), capacity=1)
    for x in {w for edge in g.edges for w in edge}:
        net.add_edge(("v", x), SINK, capacity=capacity)
    return net


def orientation_feasible(g: MultiGraph, capacity: int) -> Optional[Orientation]:
    """An orientation with in-degree <= capacity everywhere, or None if none exists"""
    if capacity < 1:
        raise OracleInputError(f"capacity must be >= 1, got {capacity}")
    if g.m == 0:
        return Orientation(())

    value, flow = nx.maximum_flow(build_network(g, capacity), SOURCE, SINK)
    if value < g.m:
        return None

    flags = []
    for i, (u, v) in enumerate(g.edges):
        out = flow[("e", i)]
        flags.append(u != v and out.get(("v", v), 0) > 0)
    orientation = Orientation(tuple(flags))
    if not orientation.is_valid(g, capacity):
        raise InvariantViolation([f"flow witness exceeds capacity {capacity}"])
    return orientation


def max_subgraph_density_exceeds(g: MultiGraph, threshold: int = 2) -> bool:
    """True iff some vertex subset induces more than threshold * |subset| edges"""
    if int(threshold) != threshold:
        raise OracleInputError(f"density threshold must be an integer, got {threshold}")
    return orientation_feasible(g, int(threshold)) is None
