"""
twobin - two-choice hashing with capacity-2 buckets and relocating inserts
"""

__version__ = "1.0.0"

from .analysis import iterate_recurrence, positivity_scan, recurrence_step, threshold_bisect
from .error_handling import TwoBinError
from .oracle import MultiGraph, Orientation, brute_force_feasible, from_table, orientation_feasible, peel_k_core
from .table import (
    BfsPolicy,
    BucketTable,
    DepthLimitedPolicy,
    InsertOutcome,
    InsertReceipt,
    RandomWalkPolicy,
    greedy,
    hash_pair,
    parse_policy,
)

__all__ = [
    "__version__",
    "iterate_recurrence", "positivity_scan", "recurrence_step", "threshold_bisect",
    "TwoBinError",
    "MultiGraph", "Orientation", "brute_force_feasible", "from_table", "orientation_feasible", "peel_k_core",
    "BfsPolicy", "BucketTable", "DepthLimitedPolicy", "InsertOutcome", "InsertReceipt", "RandomWalkPolicy",
    "greedy", "hash_pair", "parse_policy",
]
