"""
Insert policies and their default search budgets
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

from ..error_handling import ConfigError

DEFAULT_DEPTH_SLACK = 4
DEFAULT_NODE_FACTOR = 8
DEFAULT_WALK_STEP_FACTOR = 8


def log2_ceil(n: int) -> int:
    return max(1, math.ceil(math.log2(max(n, 2))))


def default_max_depth(n: int, slack: int = DEFAULT_DEPTH_SLACK) -> int:
    """ceil(log2 log2 n) + slack"""
    return max(0, math.ceil(math.log2(math.log2(max(n, 4))))) + slack


def default_max_nodes(n: int, factor: int = DEFAULT_NODE_FACTOR) -> int:
    """factor * ceil(log2 n)"""
    return factor * log2_ceil(n)


def default_walk_steps(n: int, factor: int = DEFAULT_WALK_STEP_FACTOR) -> int:
    return factor * log2_ceil(n)


@dataclass(frozen=True)
class BfsPolicy:
    """Breadth-first backward search for the nearest bucket with a free slot.

    None means "use the default for the table size"; UNBOUNDED lifts the cap.
    """
    max_nodes: Optional[int] = None
    max_depth: Optional[int] = None
    depth_slack: int = DEFAULT_DEPTH_SLACK
    node_factor: int = DEFAULT_NODE_FACTOR

    def __post_init__(self):
        if self.max_nodes is not None and self.max_nodes != UNBOUNDED and self.max_nodes < 1:
            raise ConfigError("max_nodes must be >= 1")
        if self.max_depth is not None and self.max_depth != UNBOUNDED and self.max_depth < 0:
            raise ConfigError("max_depth must be >= 0")

    def caps(self, n: int):
        depth = default_max_depth(n, self.depth_slack) if self.max_depth is None else self.max_depth
        nodes = default_max_nodes(n, self.node_factor) if self.max_nodes is None else self.max_nodes
        return _cap(depth), _cap(nodes)

    @property
    def label(self) -> str:
        if self.max_depth == UNBOUNDED and self.max_nodes == UNBOUNDED:
            return "bfs:unbounded"
        if self.max_depth is None and self.max_nodes is None:
            return "bfs"
        return f"bfs:{_text(self.max_depth)}:{_text(self.max_nodes)}"


@dataclass(frozen=True)
class DepthLimitedPolicy:
    """Examine every bucket within depth h and load the least loaded one"""
    h: int
    max_nodes: Optional[int] = None
    node_factor: int = DEFAULT_NODE_FACTOR

    def __post_init__(self):
        if self.h < 0:
            raise ConfigError("h must be >= 0")
        if self.max_nodes is not None and self.max_nodes != UNBOUNDED and self.max_nodes < 1:
            raise ConfigError("max_nodes must be >= 1")

    def caps(self, n: int):
        nodes = default_max_nodes(n, self.node_factor) if self.max_nodes is None else self.max_nodes
        return self.h, _cap(nodes)

    @property
    def is_greedy(self) -> bool:
        return self.h == 0

    @property
    def label(self) -> str:
        return "greedy" if self.is_greedy else f"depth:{self.h}"


@dataclass(frozen=True)
class RandomWalkPolicy:
    """Evict uniformly chosen victims until a free slot absorbs the walker"""
    max_steps: Optional[int] = None
    step_factor: int = DEFAULT_WALK_STEP_FACTOR

    def __post_init__(self):
        if self.max_steps is not None and self.max_steps < 0:
            raise ConfigError("max_steps must be >= 0")

    def steps(self, n: int) -> int:
        return default_walk_steps(n, self.step_factor) if self.max_steps is None else self.max_steps

    @property
    def label(self) -> str:
        return "walk" if self.max_steps is None else f"walk:{self.max_steps}"


InsertPolicy = Union[BfsPolicy, DepthLimitedPolicy, RandomWalkPolicy]

# Sentinel for "no cap"
UNBOUNDED = -1


def greedy() -> DepthLimitedPolicy:
    """Two-choice placement without moves"""
    return DepthLimitedPolicy(h=0)


def unbounded_bfs() -> BfsPolicy:
    return BfsPolicy(max_nodes=UNBOUNDED, max_depth=UNBOUNDED)


def parse_policy(text: str, depth_slack: int = DEFAULT_DEPTH_SLACK,
                 node_factor: int = DEFAULT_NODE_FACTOR,
                 walk_step_factor: int = DEFAULT_WALK_STEP_FACTOR) -> InsertPolicy:
    """Parse bfs | bfs:unbounded | bfs:<depth>:<nodes> | depth:<h> | walk[:<steps>] | greedy"""
    text = text.strip().lower()
    name, _, rest = text.partition(":")
    try:
        if name == "bfs":
            if not rest:
                return BfsPolicy(depth_slack=depth_slack, node_factor=node_factor)
            if rest == "unbounded":
                return unbounded_bfs()
            depth, _, nodes = rest.partition(":")
            return BfsPolicy(max_depth=_parse_cap(depth), max_nodes=_parse_cap(nodes) if nodes else None,
                             depth_slack=depth_slack, node_factor=node_factor)
        if name == "depth" and rest:
            return DepthLimitedPolicy(h=int(rest), node_factor=node_factor)
        if name == "walk":
            return RandomWalkPolicy(max_steps=int(rest) if rest else None, step_factor=walk_step_factor)
        if name == "greedy" and not rest:
            return DepthLimitedPolicy(h=0, node_factor=node_factor)
    except ValueError as e:
        raise ConfigError(f"invalid policy '{text}': {e}") from e
    raise ConfigError(f"unknown policy '{text}'")


def _parse_cap(text: str) -> Optional[int]:
    if text in ("", "default"):
        return None
    if text in ("inf", "unbounded"):
        return UNBOUNDED
    return int(text)


def _cap(value: int) -> float:
    return math.inf if value == UNBOUNDED else value


def _text(value: Optional[int]) -> str:
    if value is None:
        return "default"
    return "inf" if value == UNBOUNDED else str(value)
