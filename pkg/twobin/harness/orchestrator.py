#!/usr/bin/env python3
"""
twobin Trial Orchestrator
Runs seeded trials in parallel, one table per trial, with lifecycle events
"""

import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional

from joblib import Parallel, delayed

from ..logging import PerformanceLogger, get_global_logger
from ..table.hashing import Hasher
from .experiment import ExperimentConfig, run_fill_to_failure, run_trial
from .report import RunReport

logger = logging.getLogger(__name__)


@dataclass
class EventMessage:
    """Event bus message"""
    event_type: str
    source: str
    data: Dict[str, Any] = field(default_factory=dict)
    timestamp: datetime = field(default_factory=datetime.now)


class EventBus:
    """Synchronous publish/subscribe for run lifecycle events"""

    def __init__(self, max_history_size: int = 1000):
        self.subscribers: Dict[str, List[Callable[[EventMessage], None]]] = {}
        self.event_history: List[EventMessage] = []
        self.max_history_size = max_history_size
        self.event_counters: Dict[str, int] = {}

    def subscribe(self, event_type: str, callback: Callable[[EventMessage], None]):
        self.subscribers.setdefault(event_type, []).append(callback)
        logger.debug(f"Subscribed to {event_type} events")

    def unsubscribe(self, event_type: str, callback: Callable[[EventMessage], None]):
        if callback in self.subscribers.get(event_type, []):
            self.subscribers[event_type].remove(callback)

    def publish(self, event: EventMessage):
        self.event_history.append(event)
        if len(self.event_history) > self.max_history_size:
            self.event_history.pop(0)
        self.event_counters[event.event_type] = self.event_counters.get(event.event_type, 0) + 1

        for callback in self.subscribers.get(event.event_type, []):
            try:
                callback(event)
            except Exception as e:
                logger.error(f"Error in event callback for {event.event_type}: {e}")

    def get_event_stats(self) -> Dict[str, Any]:
        return {
            'total_events': len(self.event_history),
            'event_counts': dict(self.event_counters),
            'subscriber_counts': {k: len(v) for k, v in self.subscribers.items()},
        }


class TrialOrchestrator:
    """Fans trials out over joblib workers; results come back in trial order"""

    def __init__(self, n_jobs: int = 1, event_bus: Optional[EventBus] = None):
        self.n_jobs = n_jobs
        self.event_bus = event_bus or EventBus()
        self.performance_metrics: Dict[str, Dict[str, Any]] = {}

    def _publish(self, event_type: str, data: Dict[str, Any]):
        self.event_bus.publish(EventMessage(event_type=event_type, source="orchestrator", data=data))
        events = get_global_logger()
        if events is not None:
            events.log_experiment_event(event_type, data)

    def _record(self, name: str, timer: PerformanceLogger, trials: int):
        self.performance_metrics[name] = {
            'duration': timer.duration,
            'trials': trials,
            'n_jobs': self.n_jobs,
            'finished_at': datetime.now().isoformat(),
        }

    def run_trials(self, config: ExperimentConfig, hasher: Optional[Hasher] = None) -> RunReport:
        """run_trial for every seed of config"""
        seeds = config.seeds()
        self._publish("run.started", {**config.to_dict(), "n_jobs": self.n_jobs})
        with PerformanceLogger(f"run_trials[{config.policy.label}]", get_global_logger()) as timer:
            trials = Parallel(n_jobs=self.n_jobs)(
                delayed(run_trial)(config, seed, hasher) for seed in seeds
            )
        self._record("run_trials", timer, len(seeds))
        report = RunReport(config=config.to_dict(), trials=list(trials))
        self._publish("run.finished", report.summary)
        return report

    def run_fills(self, config: ExperimentConfig, hasher: Optional[Hasher] = None) -> List[float]:
        """Fill-to-failure utilization for every seed of config"""
        seeds = config.seeds()
        self._publish("fill.started", {**config.to_dict(), "n_jobs": self.n_jobs})
        with PerformanceLogger(f"run_fills[{config.policy.label}]", get_global_logger()) as timer:
            utilizations = Parallel(n_jobs=self.n_jobs)(
                delayed(run_fill_to_failure)(config, seed, hasher) for seed in seeds
            )
        self._record("run_fills", timer, len(seeds))
        self._publish("fill.finished", {"utilizations": list(utilizations)})
        return list(utilizations)


def run_trials(config: ExperimentConfig, n_jobs: int = 1, hasher: Optional[Hasher] = None) -> RunReport:
    return TrialOrchestrator(n_jobs=n_jobs).run_trials(config, hasher)
