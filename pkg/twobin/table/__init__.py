"""
Two-choice bucket table with relocation-based inserts
"""

from .bucket_table import SNAPSHOT_SCHEMA_VERSION, BucketTable
from .hashing import BucketPair, FixedHasher, SeededHasher, derive_seeds, hash_pair, to_key_bytes
from .policies import (
    UNBOUNDED,
    BfsPolicy,
    DepthLimitedPolicy,
    InsertPolicy,
    RandomWalkPolicy,
    default_max_depth,
    default_max_nodes,
    default_walk_steps,
    greedy,
    parse_policy,
    unbounded_bfs,
)
from .records import EvictionPath, Hop, InsertOutcome, InsertReceipt, ItemRecord, SearchResult, SearchStats
from .search import apply_move_path, find_eviction_path_bfs, find_least_loaded_path, validate_path
from .walk import insert_random_walk

__all__ = [
    "BucketTable", "SNAPSHOT_SCHEMA_VERSION",
    "BucketPair", "FixedHasher", "SeededHasher", "derive_seeds", "hash_pair", "to_key_bytes",
    "UNBOUNDED", "BfsPolicy", "DepthLimitedPolicy", "InsertPolicy", "RandomWalkPolicy",
    "default_max_depth", "default_max_nodes", "default_walk_steps", "greedy", "parse_policy",
    "unbounded_bfs",
    "EvictionPath", "Hop", "InsertOutcome", "InsertReceipt", "ItemRecord", "SearchResult", "SearchStats",
    "apply_move_path", "find_eviction_path_bfs", "find_least_loaded_path", "validate_path",
    "insert_random_walk",
]
