#!/usr/bin/env python3
"""
twobin Logging Management
Console, rotating file and JSON handlers under the "twobin" logger namespace
"""

import json
import logging
import logging.handlers
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

ROOT_LOGGER_NAME = "twobin"

DETAILED_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(filename)s:%(lineno)d - %(funcName)s - %(message)s'
SIMPLE_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'


class TwoBinLogger:
    """Centralized logging manager for twobin runs"""

    def __init__(self, name: str = ROOT_LOGGER_NAME, level: str = "INFO",
                 log_file: str = "twobin.log", log_dir: str = "logs",
                 max_size: int = 10 * 1024 * 1024, backup_count: int = 5,
                 file_logging: bool = True, json_logs: bool = False):
        self.name = name
        self.level = getattr(logging, level.upper())
        self.log_file = log_file
        self.log_dir = Path(log_dir)
        self.max_size = max_size
        self.backup_count = backup_count
        self.file_logging = file_logging
        self.json_logs = json_logs

        if self.file_logging:
            self.log_dir.mkdir(parents=True, exist_ok=True)

        self.logger = self._setup_logger()

    def _setup_logger(self) -> logging.Logger:
        logger = logging.getLogger(self.name)
        logger.setLevel(self.level)
        logger.propagate = False

        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()

        # Console goes to stderr; stdout carries command results
        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(self.level)
        console_handler.setFormatter(logging.Formatter(SIMPLE_FORMAT))
        logger.addHandler(console_handler)

        if not self.file_logging:
            return logger

        file_handler = self._rotating_handler(self.log_file)
        file_handler.setLevel(self.level)
        file_handler.setFormatter(logging.Formatter(DETAILED_FORMAT))
        logger.addHandler(file_handler)

        error_handler = self._rotating_handler(f"errors_{self.log_file}")
        error_handler.setLevel(logging.ERROR)
        error_handler.setFormatter(logging.Formatter(DETAILED_FORMAT))
        logger.addHandler(error_handler)

        if self.json_logs:
            json_handler = self._rotating_handler(f"structured_{self.log_file}")
            json_handler.setLevel(self.level)
            json_handler.setFormatter(JSONFormatter())
            logger.addHandler(json_handler)

        return logger

    def _rotating_handler(self, filename: str) -> logging.handlers.RotatingFileHandler:
        return logging.handlers.RotatingFileHandler(
            self.log_dir / filename,
            maxBytes=self.max_size,
            backupCount=self.backup_count,
        )

    def get_logger(self, name: Optional[str] = None) -> logging.Logger:
        """Child logger under the twobin namespace"""
        if name:
            return logging.getLogger(f"{self.name}.{name}")
        return self.logger

    def set_level(self, level: str):
        """Set logging level on the logger and every non-error handler"""
        new_level = getattr(logging, level.upper())
        self.logger.setLevel(new_level)
        for handler in self.logger.handlers:
            if isinstance(handler, logging.handlers.RotatingFileHandler) and "errors_" in handler.baseFilename:
                continue
            handler.setLevel(new_level)

    def close(self):
        """Detach and close every handler"""
        for handler in list(self.logger.handlers):
            self.logger.removeHandler(handler)
            handler.close()

    def log_performance(self, operation: str, duration: float, details: Optional[Dict[str, Any]] = None):
        """Log performance metrics"""
        message = f"PERFORMANCE: {operation} took {duration:.4f}s"
        if details:
            message += f" - {json.dumps(details, default=str)}"
        self.logger.info(message)

    def log_experiment_event(self, event_type: str, event_data: Optional[Dict[str, Any]] = None):
        """Log experiment lifecycle events"""
        self._log_event("EXPERIMENT_EVENT", event_type, event_data)

    def log_trial_event(self, seed: int, event_type: str, event_data: Optional[Dict[str, Any]] = None):
        """Log per-trial events"""
        self._log_event("TRIAL_EVENT", f"seed={seed} - {event_type}", event_data)

    def log_oracle_event(self, event_type: str, event_data: Optional[Dict[str, Any]] = None):
        """Log oracle cross-check events"""
        self._log_event("ORACLE_EVENT", event_type, event_data)

    def _log_event(self, kind: str, label: str, event_data: Optional[Dict[str, Any]]):
        message = f"{kind}: {label}"
        if event_data:
            message += f" - {json.dumps(event_data, default=str)}"
        self.logger.info(message, extra={'extra_fields': {'event_kind': kind, **(event_data or {})}})


class JSONFormatter(logging.Formatter):
    """One JSON object per record, merged with extra_fields"""

    def format(self, record):
        log_entry = {
            'timestamp': datetime.fromtimestamp(record.created).isoformat(),
            'level': record.levelname,
            'logger': record.name,
            'message': record.getMessage(),
            'module': record.module,
            'function': record.funcName,
            'line': record.lineno,
        }

        if record.exc_info:
            log_entry['exception'] = self.formatException(record.exc_info)

        if hasattr(record, 'extra_fields'):
            log_entry.update(record.extra_fields)

        return json.dumps(log_entry, default=str)


class PerformanceLogger:
    """Times a block and logs the duration"""

    def __init__(self, operation: str, logger: Optional[TwoBinLogger] = None):
        self.logger = logger
        self.operation = operation
        self.start_time: Optional[float] = None
        self.duration: Optional[float] = None

    def _emit(self, operation: str, duration: float, details: Optional[Dict[str, Any]] = None):
        if self.logger is not None:
            self.logger.log_performance(operation, duration, details)
        else:
            message = f"PERFORMANCE: {operation} took {duration:.4f}s"
            if details:
                message += f" - {json.dumps(details, default=str)}"
            get_logger().debug(message)

    def __enter__(self):
        self.start_time = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        if self.start_time is not None:
            self.duration = time.perf_counter() - self.start_time
            self._emit(self.operation, self.duration, {'error': str(exc_val)} if exc_val else None)


_global_logger: Optional[TwoBinLogger] = None


def setup_logging(level: str = "INFO", log_file: str = "twobin.log", log_dir: str = "logs",
                  max_size: int = 10 * 1024 * 1024, backup_count: int = 5,
                  file_logging: bool = True, json_logs: bool = False) -> TwoBinLogger:
    """Configure and install the process-wide logger manager"""
    global _global_logger
    if _global_logger is not None:
        _global_logger.close()
    _global_logger = TwoBinLogger(
        name=ROOT_LOGGER_NAME,
        level=level,
        log_file=log_file,
        log_dir=log_dir,
        max_size=max_size,
        backup_count=backup_count,
        file_logging=file_logging,
        json_logs=json_logs,
    )
    return _global_logger


def get_global_logger() -> Optional[TwoBinLogger]:
    """Get the global logger manager, if logging was set up"""
    return _global_logger


def get_logger(name: Optional[str] = None) -> logging.Logger:
    """Get a logger under the twobin namespace without configuring handlers"""
    if name:
        return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")
    return logging.getLogger(ROOT_LOGGER_NAME)

