"""
Experiment harness: seeded trials, policy comparison, oracle cross-checks, reports
"""

from .acceptance import CRITERIA, DEFAULT_CRITERIA, AcceptanceResult, Scale, run_acceptance
from .compare import compare_over_seeds, compare_policies
from .experiment import ExperimentConfig, key_stream, run_fill_to_failure, run_trial, trial_graph
from .oracle_check import OracleCheckReport, check_instance, insert_all_online, oracle_check
from .orchestrator import EventBus, EventMessage, TrialOrchestrator, run_trials
from .report import SCHEMA_VERSION, RunReport, TrialReport, emit_report, load_report

__all__ = [
    "CRITERIA", "DEFAULT_CRITERIA", "AcceptanceResult", "Scale", "run_acceptance",
    "compare_over_seeds", "compare_policies",
    "ExperimentConfig", "key_stream", "run_fill_to_failure", "run_trial", "trial_graph",
    "OracleCheckReport", "check_instance", "insert_all_online", "oracle_check",
    "EventBus", "EventMessage", "TrialOrchestrator", "run_trials",
    "SCHEMA_VERSION", "RunReport", "TrialReport", "emit_report", "load_report",
]
