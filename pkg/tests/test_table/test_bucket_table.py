import json

import pytest

from twobin.error_handling import InvariantViolation, TwoBinError
from twobin.table import (
    BfsPolicy,
    BucketPair,
    BucketTable,
    InsertOutcome,
    InsertReceipt,
    ItemRecord,
    derive_seeds,
    greedy,
    to_key_bytes,
)

# Three buckets: 0 holds keys 0 and 1, 1 holds self-loops 2 and 3, 2 holds self-loop 4.
# Key 5 hashes to (0, 1), both full.
ONE_MOVE_EDGES = [(0, 2), (0, 1), (1, 1), (1, 1), (2, 2), (0, 1)]

# Buckets 0 and 1 are saturated by four (0, 1) keys; 2 and 3 likewise. Key 8 is a fifth (0, 1).
STUCK_EDGES = [(0, 1)] * 4 + [(2, 3)] * 4 + [(0, 1)]


class CountingList(list):
    """Bucket array that counts how often a bucket is fetched"""

    def __init__(self, items):
        super().__init__(items)
        self.reads = 0

    def __getitem__(self, index):
        self.reads += 1
        return super().__getitem__(index)


def layout(table):
    return [[(r.key, r.value) for r in bucket] for bucket in table.buckets]


def test_empty_table_lookup():
    """Test lookups on a fresh table miss"""
    table = BucketTable(16, rng_seed=1)
    assert table.lookup(b"missing") is None
    assert b"missing" not in table
    assert len(table) == 0
    assert table.max_load() == 0


def test_constructor_validation():
    """Test bucket count and capacity must be positive"""
    with pytest.raises(TwoBinError):
        BucketTable(0)
    with pytest.raises(TwoBinError):
        BucketTable(4, capacity=0)


def test_read_your_write():
    """Test a placed key is found with its value"""
    table = BucketTable(64, rng_seed=3)
    receipt = table.insert(b"k", b"v")
    assert receipt.outcome is InsertOutcome.PLACED
    assert table.lookup(b"k") == b"v"
    assert b"k" in table
    assert len(table) == 1
    assert table.seeds == derive_seeds(3)


def test_duplicate_insert_updates_value():
    """Test inserting an existing key overwrites its value without moving it"""
    table = BucketTable(64, rng_seed=3)
    first = table.insert(b"k", b"v1")
    second = table.insert(b"k", b"v2")
    assert second.outcome is InsertOutcome.DUPLICATE_KEY_UPDATED
    assert second.placed_in == first.placed_in
    assert second.moves == 0
    assert table.lookup(b"k") == b"v2"
    assert len(table) == 1


def test_direct_placement_without_moves(build_table, key):
    """Test a key lands in a candidate with a free slot when one exists"""
    table = build_table(3, [(0, 2), (0, 2), (1, 2), (0, 1)], placed=3)
    receipt = table.insert(key(3), b"x")
    assert receipt.placed
    assert receipt.placed_in == 1
    assert receipt.moves == 0
    assert receipt.depth == 0
    assert receipt.terminal_load == 1


def test_bfs_relocates_one_record(build_table, key):
    """Test BFS frees bucket 0 by moving key 0 into bucket 2"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    receipt = table.insert(key(5), b"new")
    assert receipt.placed
    assert receipt.moves == 1
    assert receipt.depth == 1
    assert receipt.nodes_explored == 2
    assert receipt.cycle_edges_seen == 0
    assert receipt.placed_in == 0
    assert receipt.terminal_load == 1
    assert {r.key for r in table.buckets[2]} == {key(4), key(0)}
    assert table.lookup(key(5)) == b"new"
    assert table.check_invariants() == []


def test_greedy_fails_where_bfs_succeeds(build_table, key):
    """Test greedy refuses to move and leaves the table untouched"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    before = layout(table)
    receipt = table.insert(key(5), b"new", greedy())
    assert receipt.outcome is InsertOutcome.TABLE_FULL_FAILURE
    assert receipt.moves == 0
    assert layout(table) == before
    assert len(table) == 5
    assert table.lookup(key(5)) is None


def test_stuck_component_reported(build_table, key):
    """Test a saturated component is reported as stuck, not truncated"""
    table = build_table(4, STUCK_EDGES, placed=8)
    before = layout(table)
    receipt = table.insert(key(8), b"x")
    assert receipt.failed
    assert receipt.stuck
    assert receipt.nodes_explored == 2
    assert receipt.cycle_edges_seen == 4
    assert layout(table) == before


def test_lookup_reads_at_most_two_buckets(build_table, key):
    """Test lookups fetch only the candidate buckets"""
    table = build_table(4, [(0, 1), (2, 2)], placed=0)
    table.buckets = CountingList(table.buckets)
    assert table.lookup(key(0)) is None
    assert table.buckets.reads == 2
    table.buckets.reads = 0
    assert table.lookup(key(1)) is None
    assert table.buckets.reads == 1


def test_remove(build_table, key):
    """Test removal frees the slot and reports absence"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    assert table.remove(key(1))
    assert not table.remove(key(1))
    assert table.lookup(key(1)) is None
    assert len(table) == 4
    assert table.load(0) == 1
    assert table.insert(key(5), b"new").moves == 0
    assert table.check_invariants() == []


def test_load_histogram(build_table):
    """Test the histogram counts buckets per load"""
    table = build_table(4, [(0, 1), (0, 1), (0, 1), (2, 2)])
    assert table.load_histogram() == {0: 1, 1: 2, 2: 1}
    assert table.loads().tolist() == [2, 1, 1, 0]
    assert table.max_load() == 2
    assert table.utilization == pytest.approx(0.5)
    assert table.average_degree == pytest.approx(2.0)


def test_check_invariants_detects_corruption(build_table, key):
    """Test misplaced, duplicated and miscounted records are all reported"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    assert table.check_invariants() == []

    stray = ItemRecord(key(2), b"", BucketPair(1, 1))
    table.buckets[2].append(stray)
    violations = table.check_invariants()
    assert any("outside" in v for v in violations)
    assert any("stored twice" in v for v in violations)
    assert any("count" in v for v in violations)
    with pytest.raises(InvariantViolation):
        table.assert_invariants()


def test_check_invariants_detects_overfull_bucket(build_table, key):
    """Test capacity violations are reported"""
    table = build_table(3, ONE_MOVE_EDGES, placed=5)
    table.buckets[0].append(table.buckets[2].pop())
    assert any("holds 3" in v for v in table.check_invariants())


def test_rehash_keeps_every_record():
    """Test rehashing under new seeds preserves contents and invariants"""
    table = BucketTable(128, rng_seed=5)
    for i in range(100):
        assert table.insert(i, i).placed
    assert table.rehash(derive_seeds(99))
    assert table.seeds == derive_seeds(99)
    assert len(table) == 100
    for i in range(100):
        assert table.lookup(i) == to_key_bytes(i)
    assert table.check_invariants() == []


def test_rehash_failure_leaves_table_unchanged(monkeypatch):
    """Test a failed rehash is all-or-nothing"""
    table = BucketTable(32, rng_seed=5)
    for i in range(20):
        table.insert(i, i)
    before = layout(table)
    seeds = table.seeds

    real_insert = BucketTable.insert
    calls = {"n": 0}

    def failing_insert(self, key, value=b"", policy=None):
        calls["n"] += 1
        if calls["n"] > 10:
            return InsertReceipt(InsertOutcome.TABLE_FULL_FAILURE)
        return real_insert(self, key, value, policy)

    monkeypatch.setattr(BucketTable, "insert", failing_insert)
    assert not table.rehash(derive_seeds(1))

    assert table.seeds == seeds
    assert layout(table) == before
    assert len(table) == 20


def test_snapshot_round_trip(tmp_path):
    """Test a saved table reloads slot for slot"""
    table = BucketTable(64, rng_seed=11)
    for i in range(80):
        table.insert(i, b"v%d" % i)
    path = table.save_snapshot(tmp_path / "table.json")
    restored = BucketTable.load_snapshot(path)
    assert restored.n == 64
    assert restored.seeds == table.seeds
    assert layout(restored) == layout(table)
    assert len(restored) == len(table)
    assert restored.lookup(7) == b"v7"


def test_snapshot_version_checked(tmp_path):
    """Test unknown snapshot versions are refused"""
    data = BucketTable(8, rng_seed=1).to_snapshot()
    data["schema_version"] = 99
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    with pytest.raises(TwoBinError):
        BucketTable.load_snapshot(path)


def test_snapshot_rejects_misplaced_records():
    """Test a snapshot whose records contradict the hash is refused"""
    table = BucketTable(8, rng_seed=1)
    table.insert(b"k", b"v")
    data = table.to_snapshot()
    item = data["items"][0]
    item["bucket"] = next(b for b in range(8) if b not in (item["b1"], item["b2"]))
    with pytest.raises(InvariantViolation):
        BucketTable.from_snapshot(data)


def test_default_policy_is_bfs(build_table, key):
    """Test insert without a policy behaves like BfsPolicy()"""
    a = build_table(3, ONE_MOVE_EDGES, placed=5)
    b = build_table(3, ONE_MOVE_EDGES, placed=5)
    assert a.insert(key(5)) == b.insert(key(5), policy=BfsPolicy())
