#!/usr/bin/env python3
"""
twobin Command Line
Experiment driver: trials, fills, policy comparison, recurrence analysis and oracle checks
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from .analysis.bounds import UTILIZATION_FLOOR
from .analysis.recurrence import iterate_recurrence, threshold_bisect, write_trace_csv
from .config import TwoBinConfig, get_config, load_config
from .error_handling import ErrorCategory, ErrorSeverity, ReportWriteError, TwoBinError, get_error_handler
from .harness.acceptance import DEFAULT_CRITERIA, Scale, run_acceptance
from .harness.compare import compare_over_seeds
from .harness.experiment import ExperimentConfig
from .harness.oracle_check import oracle_check
from .harness.orchestrator import TrialOrchestrator
from .harness.report import FORMATS, emit_report, write_json
from .logging import setup_logging
from .table.policies import parse_policy, unbounded_bfs

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def setup_argument_parser() -> argparse.ArgumentParser:
    """Setup command line argument parser"""
    parser = argparse.ArgumentParser(
        prog="twobin",
        description="twobin - two-choice bucket hashing experiments",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python -m twobin run --n 32768 --s 3.3 --policy bfs --out report.json
  python -m twobin fill --n 32768 --trials 10
  python -m twobin compare --n 65536 --m 65536 --capacity 65536 --policies depth:1
  python -m twobin threshold --lo 3.0 --hi 4.0 --tol 1e-3
  python -m twobin recurrence --s 3.3 --out trace.csv
  python -m twobin oracle-check --instances 10000
  python -m twobin verify --criteria A1,A7,A8 --scale quick
        """
    )
    parser.add_argument('--config', '-c', type=str, default=None,
                        help='Configuration file path (default: twobin.yaml if present)')
    parser.add_argument('--log-level', '-l', choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                        default=None, help='Logging level (default: from configuration)')
    parser.add_argument('--log-file', type=str, default=None, help='Log file name inside the log directory')
    parser.add_argument('--no-file-log', action='store_true', help='Log to the console only')
    parser.add_argument('--jobs', '-j', type=int, default=None, help='Parallel trial workers (joblib n_jobs)')

    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='Seeded trials of one configuration')
    _add_size_args(run)
    run.add_argument('--policy', default='bfs', help='bfs | bfs:<depth>:<nodes> | bfs:unbounded | depth:<h> | '
                                                     'walk[:<steps>] | greedy (default: bfs)')
    run.add_argument('--trials', type=int, default=None)
    run.add_argument('--seed', type=int, default=None)
    run.add_argument('--on-failure', choices=['stop', 'skip'], default=None)
    run.add_argument('--key-source', choices=['sequential', 'random-bytes'], default=None)
    run.add_argument('--probe-core', action='store_true', help='Record the 3-core size of each key stream')
    run.add_argument('--out', type=str, default=None, help='Report path')
    run.add_argument('--format', choices=FORMATS, default=None, help='Report format (default: from --out suffix)')

    fill = sub.add_parser('fill', help='Fill to first failure with unbounded BFS')
    fill.add_argument('--n', type=int, required=True)
    fill.add_argument('--capacity', type=int, default=None)
    fill.add_argument('--seed', type=int, default=None)
    fill.add_argument('--trials', type=int, default=None)
    fill.add_argument('--out', type=str, default=None)

    compare = sub.add_parser('compare', help='Compare policies on one key stream')
    _add_size_args(compare)
    compare.add_argument('--policies', default='depth:1', help='Comma separated policies; greedy is always added')
    compare.add_argument('--seed', type=int, default=None)
    compare.add_argument('--trials', type=int, default=1)
    compare.add_argument('--out', type=str, default=None, help='CSV path')

    threshold = sub.add_parser('threshold', help='Bisect the recurrence threshold')
    threshold.add_argument('--lo', type=float, default=3.0)
    threshold.add_argument('--hi', type=float, default=4.0)
    threshold.add_argument('--tol', type=float, default=1e-3)

    recurrence = sub.add_parser('recurrence', help='Iterate the recurrence for one s')
    recurrence.add_argument('--s', type=float, required=True)
    recurrence.add_argument('--target', type=float, default=None)
    recurrence.add_argument('--max-iters', type=int, default=None)
    recurrence.add_argument('--out', type=str, default=None, help='Trace CSV path')

    oracle = sub.add_parser('oracle-check', help='Cross-check online inserts against both oracles')
    oracle.add_argument('--instances', type=int, default=10_000)
    oracle.add_argument('--max-n', type=int, default=8)
    oracle.add_argument('--max-m', type=int, default=16)
    oracle.add_argument('--capacity', type=int, default=2)
    oracle.add_argument('--seed', type=int, default=0)
    oracle.add_argument('--out', type=str, default=None)

    verify = sub.add_parser('verify', help='Run acceptance checks')
    verify.add_argument('--criteria', default=','.join(DEFAULT_CRITERIA), help='Comma separated, e.g. A1,A7 or MOVES')
    verify.add_argument('--scale', choices=[s.value for s in Scale], default=Scale.FULL.value)
    verify.add_argument('--out', type=str, default=None)

    return parser


def _add_size_args(parser: argparse.ArgumentParser):
    parser.add_argument('--n', type=int, required=True, help='Bucket count')
    size = parser.add_mutually_exclusive_group(required=True)
    size.add_argument('--s', type=float, help='Average degree; m = floor(s * n / 2)')
    size.add_argument('--m', type=int, help='Number of keys')
    parser.add_argument('--capacity', type=int, default=None, help='Bucket capacity B')


def _print_json(payload):
    print(json.dumps(payload, indent=2, default=str))


def _policy(text: str, config: TwoBinConfig):
    return parse_policy(text, depth_slack=config.table.depth_slack, node_factor=config.table.node_factor,
                        walk_step_factor=config.table.walk_step_factor)


def cmd_run(args, config: TwoBinConfig, n_jobs: int) -> int:
    experiment = ExperimentConfig(
        n=args.n, s=args.s, m=args.m,
        capacity=config.table.capacity if args.capacity is None else args.capacity,
        policy=_policy(args.policy, config),
        trials=config.harness.trials if args.trials is None else args.trials,
        base_seed=config.harness.base_seed if args.seed is None else args.seed,
        key_source=args.key_source or config.harness.key_source,
        on_failure=args.on_failure or config.harness.on_failure,
        probe_core=args.probe_core,
    )
    report = TrialOrchestrator(n_jobs).run_trials(experiment)
    if args.out:
        fmt = args.format or ('csv' if Path(args.out).suffix == '.csv' else 'json')
        emit_report(report, fmt, args.out)
    _print_json({"config": report.config, "summary": report.summary})
    return EXIT_VIOLATION if report.summary["invariant_violations"] else EXIT_OK


def cmd_fill(args, config: TwoBinConfig, n_jobs: int) -> int:
    experiment = ExperimentConfig(
        n=args.n, m=0,
        capacity=config.table.capacity if args.capacity is None else args.capacity,
        policy=unbounded_bfs(),
        trials=config.harness.trials if args.trials is None else args.trials,
        base_seed=config.harness.base_seed if args.seed is None else args.seed,
    )
    utilizations = TrialOrchestrator(n_jobs).run_fills(experiment)
    payload = {
        "n": args.n,
        "capacity": experiment.capacity,
        "seeds": experiment.seeds(),
        "utilization": utilizations,
        "mean_utilization": float(np.mean(utilizations)),
        "floor": UTILIZATION_FLOOR,
    }
    if args.out:
        write_json(payload, args.out)
    _print_json(payload)
    return EXIT_OK


def cmd_compare(args, config: TwoBinConfig, n_jobs: int) -> int:
    experiment = ExperimentConfig(
        n=args.n, s=args.s, m=args.m,
        capacity=config.table.capacity if args.capacity is None else args.capacity,
        trials=args.trials,
        base_seed=config.harness.base_seed if args.seed is None else args.seed,
        on_failure="skip",
    )
    policies = [_policy(p, config) for p in args.policies.split(',') if p.strip()]
    frame = compare_over_seeds(experiment, policies)
    if args.out:
        try:
            frame.to_csv(args.out, index=False)
        except OSError as e:
            raise ReportWriteError(args.out, e) from e
    print(frame.to_string(index=False))
    return EXIT_OK


def cmd_threshold(args, config: TwoBinConfig, n_jobs: int) -> int:
    s_star = threshold_bisect(args.lo, args.hi, args.tol)
    _print_json({"lo": args.lo, "hi": args.hi, "tol": args.tol, "threshold": s_star})
    return EXIT_OK


def cmd_recurrence(args, config: TwoBinConfig, n_jobs: int) -> int:
    trace = iterate_recurrence(
        args.s,
        target=config.analysis.target if args.target is None else args.target,
        max_iters=config.analysis.converge_iters if args.max_iters is None else args.max_iters,
        stabilize_tol=config.analysis.stabilize_tol,
    )
    if args.out:
        write_trace_csv(trace, args.out)
    _print_json({"s": trace.s, "terminated_by": trace.terminated_by.value,
                 "iterations": trace.iterations, "final": trace.final})
    return EXIT_OK


def cmd_oracle_check(args, config: TwoBinConfig, n_jobs: int) -> int:
    report = oracle_check(args.instances, args.max_n, args.max_m, args.seed, args.capacity)
    if args.out:
        write_json(report.to_dict(), args.out)
    _print_json({"instances": report.instances, "feasible": report.feasible,
                 "disagreements": len(report.disagreements)})
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_verify(args, config: TwoBinConfig, n_jobs: int) -> int:
    criteria = [c.strip().upper() for c in args.criteria.split(',') if c.strip()]
    results = run_acceptance(criteria, Scale(args.scale), n_jobs)
    payload = [{"name": r.name, "description": r.description, "passed": r.passed, "details": r.details}
               for r in results]
    if args.out:
        write_json({"scale": args.scale, "results": payload}, args.out)
    for r in results:
        print(f"{r.name} {'PASS' if r.passed else 'FAIL'} - {r.description}")
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


COMMANDS = {
    'run': cmd_run,
    'fill': cmd_fill,
    'compare': cmd_compare,
    'threshold': cmd_threshold,
    'recurrence': cmd_recurrence,
    'oracle-check': cmd_oracle_check,
    'verify': cmd_verify,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = setup_argument_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    try:
        config = load_config(args.config) if args.config else get_config()
    except TwoBinError as e:
        print(f"Configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    if not config.validate_config():
        return EXIT_USAGE

    setup_logging(
        level=args.log_level or config.system.log_level,
        log_file=args.log_file or config.system.log_file,
        log_dir=config.system.log_dir,
        max_size=config.system.max_log_size,
        backup_count=config.system.log_backup_count,
        file_logging=config.system.file_logging and not args.no_file_log,
        json_logs=config.system.json_logs,
    )
    logger.debug(f"Arguments: {vars(args)}")
    n_jobs = args.jobs if args.jobs is not None else config.harness.n_jobs
    handler = get_error_handler()

    try:
        code = COMMANDS[args.command](args, config, n_jobs)
    except (ValueError, ReportWriteError) as e:
        handler.handle_error(e, context=args.command, category=ErrorCategory.CONFIG, severity=ErrorSeverity.MEDIUM)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except TwoBinError as e:
        handler.handle_error(e, context=args.command, category=ErrorCategory.HARNESS, severity=ErrorSeverity.CRITICAL)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_VIOLATION

    if code == EXIT_OK and handler.has_violations():
        logger.error(f"Run recorded violations: {handler.get_error_summary()}")
        return EXIT_VIOLATION
    return code


if __name__ == "__main__":
    sys.exit(main())
