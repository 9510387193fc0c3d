"""
Shared pytest fixtures for twobin
"""

import os

import pytest
from hypothesis import HealthCheck, settings

from twobin.error_handling import get_error_handler
from twobin.table import BfsPolicy, BucketTable, FixedHasher, to_key_bytes

settings.register_profile(
    "twobin",
    max_examples=150,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("twobin")


@pytest.fixture(autouse=True)
def clean_error_handler():
    """Every test starts with an empty error history"""
    get_error_handler().reset()
    yield
    get_error_handler().reset()


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch, tmp_path):
    """Keep TWOBIN_* variables and stray twobin.yaml files out of tests"""
    for name in list(os.environ):
        if name.startswith("TWOBIN_"):
            monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)


@pytest.fixture
def build_table():
    """Table whose key i hashes to edges[i]; keys[:placed] are inserted with BFS"""
    def _build(n, edges, capacity=2, placed=None, rng_seed=0):
        table = BucketTable(n, capacity, hasher=FixedHasher.from_edges(edges), rng_seed=rng_seed)
        count = len(edges) if placed is None else placed
        for i in range(count):
            receipt = table.insert(to_key_bytes(i), to_key_bytes(i), BfsPolicy())
            assert receipt.placed, f"fixture key {i} did not fit"
        return table
    return _build


@pytest.fixture
def key():
    return to_key_bytes
