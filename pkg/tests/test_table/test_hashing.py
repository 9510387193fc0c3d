import numpy as np
import pytest
from scipy import stats

from twobin.error_handling import TwoBinError
from twobin.table import BucketPair, FixedHasher, SeededHasher, derive_seeds, hash_pair, to_key_bytes

SEEDS = derive_seeds(7)


def test_hash_pair_is_deterministic():
    """Test the same key and seeds always give the same pair"""
    assert hash_pair(b"alpha", SEEDS, 1000) == hash_pair(b"alpha", SEEDS, 1000)
    assert SeededHasher(SEEDS)(b"alpha", 1000) == hash_pair(b"alpha", SEEDS, 1000)


def test_hash_pair_single_bucket():
    """Test a one-bucket table maps every key to a self-loop on bucket 0"""
    for i in range(50):
        assert hash_pair(to_key_bytes(i), SEEDS, 1) == BucketPair(0, 0)


def test_hash_pair_in_range():
    """Test both indices fall in [0, n) for odd and power-of-two sizes"""
    for n in (3, 17, 1024):
        for i in range(500):
            pair = hash_pair(to_key_bytes(i), SEEDS, n)
            assert 0 <= pair.b1 < n
            assert 0 <= pair.b2 < n


def test_hash_pair_rejects_empty_table():
    """Test n < 1 is refused"""
    with pytest.raises(TwoBinError):
        hash_pair(b"x", SEEDS, 0)


def test_seeds_change_the_pair():
    """Test different seeds give a different assignment for most keys"""
    other = derive_seeds(8)
    differing = sum(hash_pair(to_key_bytes(i), SEEDS, 4096) != hash_pair(to_key_bytes(i), other, 4096)
                    for i in range(1000))
    assert differing > 990


def test_hash_pair_uniformity():
    """Test both coordinates pass a chi-square uniformity check"""
    n = 256
    keys = [to_key_bytes(i) for i in range(2 ** 16)]
    pairs = [hash_pair(k, SEEDS, n) for k in keys]
    for coordinate in (np.array([p.b1 for p in pairs]), np.array([p.b2 for p in pairs])):
        counts = np.bincount(coordinate, minlength=n)
        assert stats.chisquare(counts).pvalue > 0.001


def test_self_loops_are_rare():
    """Test the self-loop fraction is close to 1/n"""
    n = 64
    loops = sum(hash_pair(to_key_bytes(i), SEEDS, n).is_self_loop for i in range(20000))
    assert loops / 20000 < 3 / n


def test_to_key_bytes_conversions():
    """Test key normalization for every accepted type"""
    assert to_key_bytes(b"ab") == b"ab"
    assert to_key_bytes(bytearray(b"ab")) == b"ab"
    assert to_key_bytes(memoryview(b"ab")) == b"ab"
    assert to_key_bytes("ab") == b"ab"
    assert to_key_bytes(1) == b"\x01" + b"\x00" * 7
    assert to_key_bytes(np.int64(258)) == (258).to_bytes(8, "little")
    with pytest.raises(TypeError):
        to_key_bytes(1.5)


def test_fixed_hasher():
    """Test fixed outcomes and their errors"""
    hasher = FixedHasher.from_edges([(0, 1), (2, 2)])
    assert hasher(to_key_bytes(0), 3) == BucketPair(0, 1)
    assert hasher(to_key_bytes(1), 3) == BucketPair(2, 2)
    with pytest.raises(TwoBinError):
        hasher(to_key_bytes(5), 3)
    with pytest.raises(TwoBinError):
        hasher(to_key_bytes(1), 2)


def test_bucket_pair_other():
    """Test the alternate bucket of a record"""
    pair = BucketPair(3, 5)
    assert pair.other(3) == 5
    assert pair.other(5) == 3
    assert BucketPair(4, 4).other(4) == 4
    assert BucketPair(4, 4).distinct() == (4,)
    assert 5 in pair and 4 not in pair
    with pytest.raises(ValueError):
        pair.other(1)
