"""
Offline feasibility oracles over the bucket graph
"""

from .brute import MAX_BRUTE_EDGES, brute_force_feasible, subset_density_exceeds
from .flow import build_network, max_subgraph_density_exceeds, orientation_feasible
from .graph import (
    MultiGraph,
    Orientation,
    complete_graph,
    from_table,
    random_multigraph,
    read_edge_list,
    write_edge_list,
)
from .kcore import core_size, peel_k_core

__all__ = [
    "MAX_BRUTE_EDGES", "brute_force_feasible", "subset_density_exceeds",
    "build_network", "max_subgraph_density_exceeds", "orientation_feasible",
    "MultiGraph", "Orientation", "complete_graph", "from_table", "random_multigraph",
    "read_edge_list", "write_edge_list",
    "core_size", "peel_k_core",
]
