"""
Bucket graph view: buckets are vertices, stored items are edges.

Self-loops and parallel edges are kept; edge index identifies an item.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple

import numpy as np

from ..error_handling import OracleInputError, ReportWriteError

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]


@dataclass(frozen=True)
class MultiGraph:
    n: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise OracleInputError(f"vertex count must be >= 0, got {self.n}")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise OracleInputError(f"edge {i} ({u}, {v}) has an endpoint outside [0, {self.n})")
        object.__setattr__(self, "edges", edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        """Degree per vertex; a self-loop contributes 2"""
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def adjacency(self) -> List[List[int]]:
        """Incident edge indices per vertex; a self-loop is listed twice"""
        incident: List[List[int]] = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            incident[u].append(i)
            incident[v].append(i)
        return incident

    def subgraph_edge_count(self, vertices) -> int:
        inside = set(vertices)
        return sum(1 for u, v in self.edges if u in inside and v in inside)

    def with_edge(self, edge: Edge) -> "MultiGraph":
        return MultiGraph(self.n, self.edges + (edge,))


@dataclass(frozen=True)
class Orientation:
    """toward_second[i] is True when edge i points at its second endpoint"""
    toward_second: Tuple[bool, ...]

    def heads(self, g: MultiGraph) -> List[int]:
        if len(self.toward_second) != g.m:
            raise OracleInputError(f"orientation has {len(self.toward_second)} flags for {g.m} edges")
        return [v if flag else u for (u, v), flag in zip(g.edges, self.toward_second)]

    def in_degrees(self, g: MultiGraph) -> np.ndarray:
        return np.bincount(np.asarray(self.heads(g), dtype=np.int64), minlength=g.n)

    def is_valid(self, g: MultiGraph, capacity: int) -> bool:
        """Complete and within capacity at every vertex"""
        if len(self.toward_second) != g.m:
            return False
        return bool(g.m == 0 or self.in_degrees(g).max() <= capacity)


def from_table(table) -> Tuple[MultiGraph, Orientation]:
    """One edge per stored record, oriented toward the bucket that holds it"""
    edges, flags = [], []
    for b, bucket in enumerate(table.buckets):
        for record in bucket:
            edges.append((record.pair.b1, record.pair.b2))
            flags.append(b != record.pair.b1)
    return MultiGraph(table.n, tuple(edges)), Orientation(tuple(flags))


def random_multigraph(n: int, m: int, rng: np.random.Generator) -> MultiGraph:
    """m edges with independent uniform endpoints (balls-into-bins model)"""
    if n < 1 and m > 0:
        raise OracleInputError("cannot place edges on an empty vertex set")
    ends = rng.integers(0, max(n, 1), size=(m, 2))
    return MultiGraph(n, tuple(map(tuple, ends.tolist())))


def complete_graph(n: int) -> MultiGraph:
    return MultiGraph(n, tuple((u, v) for u in range(n) for v in range(u + 1, n)))


def read_edge_list(path) -> MultiGraph:
    """Parse the 'n m' header followed by m 'u v' lines"""
    path = Path(path)
    lines = [line.split() for line in path.read_text().splitlines() if line.strip() and not line.startswith("#")]
    if not lines or len(lines[0]) != 2:
        raise OracleInputError(f"{path}: missing 'n m' header")
    try:
        n, m = int(lines[0][0]), int(lines[0][1])
        edges = [(int(u), int(v)) for u, v in lines[1:]]
    except ValueError as e:
        raise OracleInputError(f"{path}: {e}") from e
    if len(edges) != m:
        raise OracleInputError(f"{path}: header says {m} edges, found {len(edges)}")
    return MultiGraph(n, tuple(edges))


def write_edge_list(g: MultiGraph, path) -> Path:
    path = Path(path)
    body = "\n".join([f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]) + "\n"
    try:
        path.write_text(body)
    except OSError as e:
        raise ReportWriteError(path, e) from e
    return path


def edges_of(pairs: Sequence) -> Tuple[Edge, ...]:
    """Edges from BucketPair-like objects (anything with b1/b2)"""
    return tuple((p.b1, p.b2) for p in pairs)
