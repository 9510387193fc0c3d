#!/usr/bin/env python3
"""
twobin Error Handling
Exception hierarchy plus centralized error recording with categorization and reporting
"""

import json
import logging
import traceback
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

logger = logging.getLogger(__name__)


class TwoBinError(Exception):
    """Base class for every error raised by twobin"""


class StalePathError(TwoBinError):
    """An eviction path no longer matches the table it was discovered on"""


class CapacityInvariantError(TwoBinError):
    """A move would push a bucket above its capacity"""


class InvariantViolation(TwoBinError):
    """A full table scan found records or counters in an illegal state"""

    def __init__(self, violations: List[str]):
        self.violations = list(violations)
        preview = "; ".join(self.violations[:5])
        super().__init__(f"{len(self.violations)} invariant violation(s): {preview}")


class AnalysisDomainError(TwoBinError, ValueError):
    """Argument outside the domain of a recurrence or scan"""


class BracketError(TwoBinError, ValueError):
    """Bisection endpoints do not bracket the threshold"""


class OracleInputError(TwoBinError, ValueError):
    """Graph input outside what an oracle accepts"""


class ConfigError(TwoBinError, ValueError):
    """Invalid configuration value"""


class ReportWriteError(TwoBinError, OSError):
    """A report or fixture could not be written"""

    def __init__(self, path: Path, cause: Exception):
        self.path = Path(path)
        self.cause = cause
        super().__init__(f"cannot write {self.path}: {cause}")


class ErrorSeverity(Enum):
    """HIGH and CRITICAL records count as violations"""
    LOW = "LOW"
    MEDIUM = "MEDIUM"
    HIGH = "HIGH"
    CRITICAL = "CRITICAL"


class ErrorCategory(Enum):
    """Error categories"""
    TABLE = "TABLE"
    ORACLE = "ORACLE"
    ANALYSIS = "ANALYSIS"
    HARNESS = "HARNESS"
    IO = "IO"
    CONFIG = "CONFIG"
    VALIDATION = "VALIDATION"
    UNKNOWN = "UNKNOWN"


# Severities that make a CLI run exit with status 1
VIOLATION_SEVERITIES = (ErrorSeverity.HIGH, ErrorSeverity.CRITICAL)


class ErrorHandler:
    """Central error recorder for twobin runs"""

    def __init__(self, max_history_size: int = 1000):
        self.error_history: List[Dict[str, Any]] = []
        self.max_history_size = max_history_size
        self.error_callbacks: Dict[ErrorCategory, List[Callable]] = {}
        self.error_counts = {severity: 0 for severity in ErrorSeverity}
        self.last_reset = datetime.now()

    def handle_error(self, error: Exception, context: str = "",
                     category: ErrorCategory = ErrorCategory.UNKNOWN,
                     severity: ErrorSeverity = ErrorSeverity.MEDIUM,
                     additional_data: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Record an error, log it at a level matching its severity and notify callbacks"""
        error_record = self._create_error_record(error, context, category, severity, additional_data)
        self._add_to_history(error_record)
        self.error_counts[severity] += 1
        self._log_error(error_record, severity)

        for callback in self.error_callbacks.get(category, []):
            try:
                callback(error_record)
            except Exception as e:
                logger.error(f"Error callback failed: {e}")

        return error_record

    def record_violation(self, message: str, context: str = "",
                         category: ErrorCategory = ErrorCategory.VALIDATION,
                         additional_data: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Record an invariant or acceptance violation that has no exception object"""
        return self.handle_error(InvariantViolation([message]), context, category,
                                 ErrorSeverity.HIGH, additional_data)

    def _create_error_record(self, error: Exception, context: str,
                             category: ErrorCategory, severity: ErrorSeverity,
                             additional_data: Optional[Dict[str, Any]]) -> Dict[str, Any]:
        """Error as a JSON-ready dict"""
        tb = traceback.format_exc()
        return {
            'timestamp': datetime.now().isoformat(),
            'error_type': type(error).__name__,
            'error_message': str(error),
            'traceback': tb if tb.strip() != "NoneType: None" else "",
            'context': context,
            'category': category.value,
            'severity': severity.value,
            'additional_data': additional_data or {},
        }

    def _add_to_history(self, error_record: Dict[str, Any]):
        self.error_history.append(error_record)
        if len(self.error_history) > self.max_history_size:
            self.error_history.pop(0)

    def _log_error(self, error_record: Dict[str, Any], severity: ErrorSeverity):
        message = (f"ERROR [{error_record['category']}] in {error_record['context']}: "
                   f"{error_record['error_message']}")

        if severity == ErrorSeverity.CRITICAL:
            logger.critical(message)
        elif severity == ErrorSeverity.HIGH:
            logger.error(message)
        elif severity == ErrorSeverity.MEDIUM:
            logger.warning(message)
        else:
            logger.info(message)

        if error_record['additional_data']:
            logger.debug(f"Additional error data: {json.dumps(error_record['additional_data'], default=str)}")

    def add_error_callback(self, category: ErrorCategory, callback: Callable):
        """Run callback for every record in category"""
        self.error_callbacks.setdefault(category, []).append(callback)

    def remove_error_callback(self, category: ErrorCategory, callback: Callable):
        """Detach a callback added with add_error_callback"""
        if callback in self.error_callbacks.get(category, []):
            self.error_callbacks[category].remove(callback)

    def has_violations(self) -> bool:
        """True when any HIGH or CRITICAL error was recorded since the last reset"""
        return any(self.error_counts[severity] for severity in VIOLATION_SEVERITIES)

    def get_error_summary(self) -> Dict[str, Any]:
        """Counts by severity and category, plus the most recent records"""
        return {
            'total_errors': len(self.error_history),
            'error_counts_by_severity': {severity.value: count for severity, count in self.error_counts.items()},
            'error_counts_by_category': self._get_error_counts_by_category(),
            'recent_errors': self.error_history[-10:],
            'last_reset': self.last_reset.isoformat(),
        }

    def _get_error_counts_by_category(self) -> Dict[str, int]:
        category_counts: Dict[str, int] = {}
        for error in self.error_history:
            category_counts[error['category']] = category_counts.get(error['category'], 0) + 1
        return category_counts

    def get_errors_by_category(self, category: ErrorCategory, limit: int = 100) -> List[Dict[str, Any]]:
        """Records of one category, newest last"""
        category_errors = [e for e in self.error_history if e['category'] == category.value]
        return category_errors[-limit:] if limit else category_errors

    def reset(self):
        """Clear history and counters"""
        self.error_history.clear()
        self.error_counts = {severity: 0 for severity in ErrorSeverity}
        self.last_reset = datetime.now()
        logger.info("Error history cleared")

    def export_error_report(self, filename: Optional[str] = None) -> Path:
        """Export error report to a JSON file"""
        if filename is None:
            timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
            filename = f"logs/error_report_{timestamp}.json"
        path = Path(filename)

        report = {
            'generated_at': datetime.now().isoformat(),
            'summary': self.get_error_summary(),
            'all_errors': self.error_history,
        }
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(report, indent=2, default=str))
        except OSError as e:
            raise ReportWriteError(path, e) from e

        logger.info(f"Error report exported to {path}")
        return path


# Global error handler instance
error_handler = ErrorHandler()


def get_error_handler() -> ErrorHandler:
    """Process-wide handler"""
    return error_handler


def handle_error(error: Exception, context: str = "",
                 category: ErrorCategory = ErrorCategory.UNKNOWN,
                 severity: ErrorSeverity = ErrorSeverity.MEDIUM,
                 additional_data: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Record an error on the process-wide handler"""
    return error_handler.handle_error(error, context, category, severity, additional_data)

