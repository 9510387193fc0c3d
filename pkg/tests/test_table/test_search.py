import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from twobin.error_handling import StalePathError
from twobin.table import (
    BfsPolicy,
    BucketPair,
    DepthLimitedPolicy,
    EvictionPath,
    FixedHasher,
    Hop,
    ItemRecord,
    apply_move_path,
    find_eviction_path_bfs,
    find_least_loaded_path,
    to_key_bytes,
    unbounded_bfs,
    validate_path,
)
from twobin.table.bucket_table import BucketTable

ONE_MOVE_EDGES = [(0, 2), (0, 1), (1, 1), (1, 1), (2, 2), (0, 1)]

# Bucket 0 holds keys 0 -> alt 2 and 1 -> alt 3; bucket 1 two self-loops; bucket 2 one
# self-loop; bucket 3 empty. Key 5 hashes to (0, 1).
TWO_EXITS_EDGES = [(0, 2), (0, 3), (1, 1), (1, 1), (2, 2), (0, 1)]


def test_free_start_gives_empty_path():
    """Test an empty table yields a zero-hop path at the first start"""
    table = BucketTable(4, rng_seed=0)
    result = find_eviction_path_bfs(table, 2, 3)
    assert result.found
    assert result.path == EvictionPath(start=2)
    assert len(result.path) == 0
    assert result.terminal_load == 0
    assert result.stats.nodes_explored == 1


def test_one_hop_path(build_table):
    """Test the path shape for a single relocation"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    result = find_eviction_path_bfs(table, 0, 1)
    assert result.path == EvictionPath(start=0, hops=(Hop(bucket=0, slot=0, target=2),))
    assert result.path.terminal == 2
    assert apply_move_path(table, result.path) == 1
    assert table.loads().tolist() == [1, 2, 2]


def test_node_cap_stops_search(build_table):
    """Test max_nodes=1 gives up after the first bucket without claiming stuck"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    result = find_eviction_path_bfs(table, 0, 1, max_nodes=1)
    assert not result.found
    assert result.stats.nodes_explored == 1
    assert not result.stats.stuck


def test_depth_cap_truncates(build_table):
    """Test max_depth=0 prunes successors and is not reported as stuck"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    result = find_eviction_path_bfs(table, 0, 1, max_depth=0)
    assert not result.found
    assert result.stats.truncated
    assert not result.stats.stuck
    assert result.stats.nodes_explored == 2


def test_bfs_policy_caps_are_applied(build_table, key):
    """Test a policy-level node cap turns a feasible insert into a failure"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    assert table.insert(key(5), policy=BfsPolicy(max_nodes=1)).failed
    assert table.insert(key(5), policy=BfsPolicy(max_depth=1)).placed


def test_stale_path_rejected(build_table, key):
    """Test each way a path can go stale"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    path = find_eviction_path_bfs(table, 0, 1).path

    with pytest.raises(StalePathError):
        validate_path(table, EvictionPath(start=1, hops=path.hops))
    with pytest.raises(StalePathError):
        validate_path(table, EvictionPath(start=0, hops=(Hop(0, 5, 2),)))
    with pytest.raises(StalePathError):
        validate_path(table, EvictionPath(start=0, hops=(Hop(0, 1, 2),)))

    table.buckets[2].append(ItemRecord(b"extra", b"", BucketPair(2, 2)))
    with pytest.raises(StalePathError):
        validate_path(table, path)


def test_stale_path_after_removal(build_table, key):
    """Test a path computed before a removal no longer applies"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    path = find_eviction_path_bfs(table, 0, 1).path
    table.remove(key(0))
    with pytest.raises(StalePathError):
        apply_move_path(table, path)


def test_path_with_repeated_bucket_rejected():
    """Test a path that revisits a bucket is refused"""
    edges = [(0, 1), (0, 1), (1, 0), (1, 0)]
    table = BucketTable(2, hasher=FixedHasher.from_edges(edges), rng_seed=0)
    table.buckets[0] = [ItemRecord(to_key_bytes(0), b"", BucketPair(0, 1))]
    table.buckets[1] = [ItemRecord(to_key_bytes(2), b"", BucketPair(1, 0))]
    table.count = 2
    path = EvictionPath(start=0, hops=(Hop(0, 0, 1), Hop(1, 0, 0)))
    with pytest.raises(StalePathError):
        validate_path(table, path)


def test_least_loaded_prefers_empty_bucket(build_table, key):
    """Test depth:1 walks to the empty bucket while BFS stops at the first free one"""
    bfs_table = build_table(4, TWO_EXITS_EDGES, placed=5)
    bfs = bfs_table.insert(key(5), policy=BfsPolicy())
    assert bfs.placed
    assert bfs.terminal_load == 1
    assert {r.key for r in bfs_table.buckets[2]} == {key(4), key(0)}

    lazy_table = build_table(4, TWO_EXITS_EDGES, placed=5)
    lazy = lazy_table.insert(key(5), policy=DepthLimitedPolicy(h=1))
    assert lazy.placed
    assert lazy.moves == 1
    assert lazy.terminal_load == 0
    assert [r.key for r in lazy_table.buckets[3]] == [key(1)]
    assert lazy_table.check_invariants() == []


def test_least_loaded_reports_terminal_load_on_failure(build_table):
    """Test a failed depth-limited search still reports the best load seen"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    result = find_least_loaded_path(table, 0, 1, h=0)
    assert not result.found
    assert result.terminal_load == 2
    assert result.stats.truncated


def test_least_loaded_ties_go_to_discovery_order():
    """Test equal loads resolve to the earliest discovered bucket"""
    table = BucketTable(4, rng_seed=0)
    result = find_least_loaded_path(table, 3, 1, h=2)
    assert result.path.start == 3


def test_least_loaded_unbounded_nodes(build_table):
    """Test an infinite node cap is accepted"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    result = find_least_loaded_path(table, 0, 1, h=3, max_nodes=math.inf)
    assert result.found
    assert result.path.terminal == 2


pairs = st.tuples(st.integers(0, 5), st.integers(0, 5))


@given(st.lists(pairs, min_size=1, max_size=14))
def test_larger_caps_never_hurt(edges):
    """Test an unbounded BFS places every key a capped BFS places on the same state"""
    hasher = FixedHasher.from_edges(edges)
    capped = BucketTable(6, hasher=hasher, rng_seed=0)
    free = BucketTable(6, hasher=hasher, rng_seed=0)
    for i in range(len(edges)):
        free.buckets = [list(b) for b in capped.buckets]
        free.count = capped.count
        capped_receipt = capped.insert(i, policy=BfsPolicy(max_depth=1, max_nodes=3))
        free_receipt = free.insert(i, policy=unbounded_bfs())
        if capped_receipt.placed:
            assert free_receipt.placed
        free.assert_invariants()


# Bucket 6 is the only free bucket; it hangs off bucket 2, which sits at depth 1
# behind start 0, while start 1 contributes two more full buckets to the queue.
DEEP_EXIT_EDGES = [(0, 2), (0, 3), (1, 4), (1, 5), (2, 6), (2, 2), (3, 3), (3, 3),
                   (4, 4), (4, 4), (5, 5), (5, 5), (6, 6), (0, 1)]
DEEP_EXIT_LAYOUT = [[0, 1], [2, 3], [4, 5], [6, 7], [8, 9], [10, 11], [12]]


def deep_exit_table() -> BucketTable:
    hasher = FixedHasher.from_edges(DEEP_EXIT_EDGES)
    table = BucketTable(7, hasher=hasher, rng_seed=0)
    for b, keys in enumerate(DEEP_EXIT_LAYOUT):
        table.buckets[b] = [ItemRecord(to_key_bytes(k), b"", hasher(to_key_bytes(k), 7)) for k in keys]
    table.count = 13
    table.assert_invariants()
    return table


def test_free_bucket_taken_when_discovered(build_table):
    """Test a free successor ends the search without waiting for its turn in the queue"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    result = find_eviction_path_bfs(table, 0, 1, max_nodes=2)
    assert result.found
    assert result.path.terminal == 2
    assert result.stats.nodes_explored == 2
    assert result.stats.cycle_edges_seen == 0


def test_free_bucket_found_within_node_budget():
    """Test the budget counts expanded buckets plus the absorbing one"""
    table = deep_exit_table()
    result = find_eviction_path_bfs(table, 0, 1, max_nodes=4)
    assert result.path == EvictionPath(start=0, hops=(Hop(0, 0, 2), Hop(2, 0, 6)))
    assert result.stats.nodes_explored == 4
    assert result.terminal_load == 1

    receipt = table.insert(13, policy=BfsPolicy(max_nodes=4))
    assert receipt.placed
    assert receipt.moves == 2
    assert table.loads().tolist() == [2, 2, 2, 2, 2, 2, 2]
    table.assert_invariants()


def test_hit_beyond_node_budget_not_taken():
    """Test a free bucket that would exceed the budget fails without claiming stuck"""
    table = deep_exit_table()
    result = find_eviction_path_bfs(table, 0, 1, max_nodes=3)
    assert not result.found
    assert result.stats.nodes_explored == 3
    assert not result.stats.stuck
