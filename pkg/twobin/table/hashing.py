"""
Two-choice hash family.

Each key maps to two candidate buckets computed from two independently seeded
xxh64 digests, reduced to [0, n) by multiply-shift.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Sequence, Tuple, Union

import numpy as np
import xxhash

from ..error_handling import TwoBinError

Seeds = Tuple[int, int]
KeyLike = Union[bytes, bytearray, memoryview, str, int]

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class BucketPair:
    """The two candidate buckets of a key (an edge of the bucket graph)"""
    b1: int
    b2: int

    @property
    def is_self_loop(self) -> bool:
        return self.b1 == self.b2

    def other(self, bucket: int) -> int:
        """The alternate bucket of a record stored in `bucket`"""
        if bucket == self.b1:
            return self.b2
        if bucket == self.b2:
            return self.b1
        raise ValueError(f"bucket {bucket} is not one of {self.b1}, {self.b2}")

    def distinct(self) -> Tuple[int, ...]:
        return (self.b1,) if self.is_self_loop else (self.b1, self.b2)

    def __contains__(self, bucket: int) -> bool:
        return bucket == self.b1 or bucket == self.b2


def to_key_bytes(key: KeyLike) -> bytes:
    """Normalize a key to bytes; ints become 8 little-endian bytes"""
    if isinstance(key, bytes):
        return key
    if isinstance(key, (bytearray, memoryview)):
        return bytes(key)
    if isinstance(key, str):
        return key.encode("utf-8")
    if isinstance(key, (int, np.integer)):
        return int(key).to_bytes(8, "little", signed=False)
    raise TypeError(f"unsupported key type {type(key).__name__}")


def _reduce(digest: int, n: int) -> int:
    # multiply-shift: high 64 bits of digest * n
    return (digest * n) >> 64


def hash_pair(key: bytes, seeds: Seeds, n: int) -> BucketPair:
    """Deterministic pair of bucket indices in [0, n) for key under the two seeds"""
    if n < 1:
        raise TwoBinError(f"bucket count must be >= 1, got {n}")
    d1 = xxhash.xxh64(key, seed=seeds[0] & _MASK64).intdigest()
    d2 = xxhash.xxh64(key, seed=seeds[1] & _MASK64).intdigest()
    return BucketPair(_reduce(d1, n), _reduce(d2, n))


def derive_seeds(seed: int) -> Seeds:
    """Two independent 64-bit hash seeds from one experiment seed"""
    state = np.random.SeedSequence(seed).generate_state(2, dtype=np.uint64)
    return int(state[0]), int(state[1])


Hasher = Callable[[bytes, int], BucketPair]


class SeededHasher:
    """Default hasher: hash_pair under fixed seeds"""

    def __init__(self, seeds: Seeds):
        self.seeds = (int(seeds[0]), int(seeds[1]))

    def __call__(self, key: bytes, n: int) -> BucketPair:
        return hash_pair(key, self.seeds, n)

    def __repr__(self):
        return f"SeededHasher(seeds={self.seeds})"


class FixedHasher:
    """Hasher with hand-picked outcomes, for fixtures and oracle cross-checks"""

    def __init__(self, pairs: Mapping[bytes, Tuple[int, int]]):
        self.pairs: Dict[bytes, BucketPair] = {
            to_key_bytes(k): BucketPair(int(v[0]), int(v[1])) for k, v in pairs.items()
        }

    @classmethod
    def from_edges(cls, edges: Sequence[Tuple[int, int]]) -> "FixedHasher":
        """Key i (as 8 little-endian bytes) hashes to edges[i]"""
        return cls({to_key_bytes(i): edge for i, edge in enumerate(edges)})

    def __call__(self, key: bytes, n: int) -> BucketPair:
        try:
            pair = self.pairs[key]
        except KeyError:
            raise TwoBinError(f"no fixed outcome for key {key.hex()}") from None
        if not (0 <= pair.b1 < n and 0 <= pair.b2 < n):
            raise TwoBinError(f"fixed outcome {pair} out of range for n={n}")
        return pair
