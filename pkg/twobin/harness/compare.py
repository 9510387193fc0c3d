"""
Side-by-side policy comparison on one key stream
"""

import logging
from typing import List, Optional, Sequence

import pandas as pd

from ..table.hashing import Hasher
from ..table.policies import InsertPolicy, greedy
from .experiment import ExperimentConfig, run_trial

logger = logging.getLogger(__name__)

COLUMNS = [
    "policy", "seed", "inserted", "failures", "max_load",
    "moves_mean", "moves_max", "nodes_mean", "nodes_max", "depth_max", "stuck_events",
]


def with_greedy_baseline(policies: Sequence[InsertPolicy]) -> List[InsertPolicy]:
    """policies, plus the h = 0 baseline if it is missing"""
    chosen = list(policies)
    if not any(p.label == "greedy" for p in chosen):
        chosen.append(greedy())
    return chosen


def compare_policies(config: ExperimentConfig, policies: Sequence[InsertPolicy], seed: int,
                     hasher: Optional[Hasher] = None) -> pd.DataFrame:
    """One row per policy; every policy sees the same hash seeds and keys"""
    rows = []
    for policy in with_greedy_baseline(policies):
        trial = run_trial(config.with_policy(policy), seed, hasher)
        rows.append({
            "policy": policy.label,
            "seed": seed,
            "inserted": trial.inserted,
            "failures": trial.failures,
            "max_load": trial.max_load,
            "moves_mean": trial.moves.mean,
            "moves_max": trial.moves.max,
            "nodes_mean": trial.nodes_explored.mean,
            "nodes_max": trial.nodes_explored.max,
            "depth_max": trial.depth.max,
            "stuck_events": trial.stuck_events,
        })
    logger.info(f"Compared {len(rows)} policies at n={config.n}, m={config.num_keys}, seed={seed}")
    return pd.DataFrame(rows, columns=COLUMNS)


def compare_over_seeds(config: ExperimentConfig, policies: Sequence[InsertPolicy],
                       hasher: Optional[Hasher] = None) -> pd.DataFrame:
    """compare_policies for every seed of config, stacked"""
    frames = [compare_policies(config, policies, seed, hasher) for seed in config.seeds()]
    return pd.concat(frames, ignore_index=True)
