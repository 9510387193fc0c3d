"""
Reference constants and size-dependent bounds used by the harness checks
"""

import math
from typing import Sequence, Tuple

import numpy as np

from ..table.policies import default_max_depth, default_max_nodes

# average degree below which the recurrence provably decays
RECURRENCE_THRESHOLD = 3.35
# series comparison s^2/2 < s + 1 already guarantees decay below this
TAYLOR_THRESHOLD = 1.0 + math.sqrt(3.0)
# above this average degree a capacity-2 table cannot hold every key
DENSITY_CEILING = 3.72

UTILIZATION_FLOOR = RECURRENCE_THRESHOLD / 4
UTILIZATION_CEILING = 0.93

# accepted slope of max moves against log2 log2 n
MOVE_SLOPE_RANGE = (0.5, 2.0)


def log2log2(n: int) -> float:
    return math.log2(math.log2(max(n, 4)))


def default_search_caps(n: int) -> Tuple[int, int]:
    """(max_depth, max_nodes) the BFS policy uses by default"""
    return default_max_depth(n), default_max_nodes(n)


def move_depth_bound(n: int, slack: int = 6) -> float:
    """log2 log2 n + slack"""
    return log2log2(n) + slack


def depth_limited_load_bound(n: int, h: int = 1, slack: int = 10) -> float:
    """Max-load ceiling for depth-limited inserts at m = n.

    Greedy (h = 0) is held to the h = 1 bound.
    """
    lll = math.log2(max(log2log2(n), 2.0))
    return 6.0 * log2log2(n) / (max(h, 1) * lll) + slack


def greedy_load_band(n: int) -> Tuple[float, float]:
    """Expected max-load band for two-choice placement with m = n"""
    return 2.0, 2.0 + log2log2(n)


def move_growth_slope(sizes: Sequence[int], max_moves: Sequence[float]) -> float:
    """Least-squares slope of max moves per insert against log2 log2 n"""
    if len(sizes) != len(max_moves) or len(set(sizes)) < 2:
        raise ValueError("need max moves for at least two distinct table sizes")
    x = np.log2(np.log2(np.maximum(np.asarray(sizes, dtype=float), 4.0)))
    slope, _ = np.polyfit(x, np.asarray(max_moves, dtype=float), 1)
    return float(slope)
