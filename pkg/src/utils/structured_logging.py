"""
Structured Logging Module

Console messages go to stderr in a readable format; with a log directory,
every record is also written as one JSON object per line, and errors are
duplicated into a separate file. stdout is left to the reports.

    setup_structured_logging(log_level="INFO", log_dir="logs")
    logging.getLogger(__name__).info("evaluated", extra={'p': 7, 'colorings': 9})
"""

import json
import logging
import logging.handlers
import sys
import time
from datetime import datetime, timezone
from functools import wraps
from pathlib import Path
from typing import Callable, Optional

CONSOLE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
PLAIN_FILE_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s'
DATE_FORMAT = '%Y-%m-%d %H:%M:%S'


class JSONFormatter(logging.Formatter):
    """
    One JSON object per record.

    Only the names in ``custom_fields`` are copied from ``extra``; anything
    else passed there stays out of the file.
    """

    custom_fields = (
        'p', 'method', 'command', 'components', 'colorings', 'width',
        'duration', 'case', 'seed', 'move', 'error_type', 'event_type',
        'function', 'engine', 'identity',
    )

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
            "thread": record.thread,
        }
        if record.exc_info and record.exc_info[0]:
            entry["exception"] = {
                "type": record.exc_info[0].__name__,
                "message": str(record.exc_info[1]),
                "traceback": self.formatException(record.exc_info),
            }
        entry.update({name: getattr(record, name) for name in self.custom_fields
                      if hasattr(record, name)})
        return json.dumps(entry, default=str)


def _level(name: str) -> int:
    level = getattr(logging, name.upper(), None)
    if not isinstance(level, int):
        raise ValueError(f"Unknown log level: {name}")
    return level


def _rotating(path: Path, level: int, formatter: logging.Formatter,
              max_bytes: int, backup_count: int) -> logging.Handler:
    handler = logging.handlers.RotatingFileHandler(
        path, maxBytes=max_bytes, backupCount=backup_count, encoding='utf-8')
    handler.setLevel(level)
    handler.setFormatter(formatter)
    return handler


def setup_structured_logging(
    log_level: str = "INFO",
    log_dir: Optional[str] = "logs",
    app_name: str = "qspine",
    enable_json: bool = True,
    enable_console: bool = True,
    console_level: str = "WARNING",
    max_bytes: int = 10 * 1024 * 1024,
    backup_count: int = 5
) -> logging.Logger:
    """
    Replace the root logger's handlers.

    Args:
        log_level: Threshold of the main log file
        log_dir: Directory for ``<app_name>.log`` and ``<app_name>_errors.log``;
            None keeps logging on the console only
        app_name: Stem of the log file names
        enable_json: JSON lines in the files (plain text otherwise)
        enable_console: Attach the stderr handler
        console_level: Threshold of the stderr handler
        max_bytes: Size at which a file rotates
        backup_count: Rotated files kept

    Returns:
        The root logger

    Raises:
        ValueError: unknown level name
    """
    file_level = _level(log_level)
    root = logging.getLogger()
    root.setLevel(logging.DEBUG)
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    if enable_console:
        console = logging.StreamHandler(sys.stderr)
        console.setLevel(getattr(logging, console_level.upper(), logging.WARNING))
        console.setFormatter(logging.Formatter(fmt=CONSOLE_FORMAT, datefmt=DATE_FORMAT))
        root.addHandler(console)

    if log_dir is None:
        return root

    directory = Path(log_dir)
    directory.mkdir(parents=True, exist_ok=True)
    formatter = JSONFormatter() if enable_json else logging.Formatter(
        fmt=PLAIN_FILE_FORMAT, datefmt=DATE_FORMAT)

    root.addHandler(_rotating(directory / f"{app_name}.log", file_level, formatter,
                              max_bytes, backup_count))
    root.addHandler(_rotating(directory / f"{app_name}_errors.log", logging.ERROR, formatter,
                              max_bytes, backup_count))

    root.debug(f"logging to {directory} at {log_level}", extra={'event_type': 'logging_initialized'})
    return root


def log_timing(logger: Optional[logging.Logger] = None,
               log_level: int = logging.DEBUG) -> Callable:
    """
    Log how long each call of the decorated function takes.

    Failures are logged at ERROR with the traceback and re-raised.
    """
    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            log = logger or logging.getLogger()
            start = time.time()
            try:
                result = func(*args, **kwargs)
            except Exception as e:
                elapsed = time.time() - start
                log.error(f"{func.__name__} failed after {elapsed:.3f}s: {e}",
                          extra={'function': func.__name__, 'duration': elapsed,
                                 'error_type': type(e).__name__, 'event_type': 'function_error'},
                          exc_info=True)
                raise
            elapsed = time.time() - start
            log.log(log_level, f"{func.__name__} completed in {elapsed:.3f}s",
                    extra={'function': func.__name__, 'duration': elapsed,
                           'event_type': 'function_timing'})
            return result

        return wrapper
    return decorator


class InvariantLogger:
    """Named logger whose methods tag each record with an ``event_type``."""

    def __init__(self, name: str = 'qspine'):
        self.logger = logging.getLogger(name)

    def log_invariant(self, command: str, p: int, method: str, **details):
        self.logger.info(f"{command}: computed with method={method} at p={p}",
                         extra={'command': command, 'p': p, 'method': method,
                                'event_type': 'invariant', **details})

    def log_refusal(self, command: str, error: Exception, **details):
        """Guard or hypothesis not met; not an error of the program."""
        self.logger.warning(f"{command}: refused: {error}",
                            extra={'command': command, 'error_type': type(error).__name__,
                                   'event_type': 'refusal', **details})

    def log_fuzz_case(self, case: int, seed: int, steps: int, **details):
        self.logger.debug(f"fuzz case {case}: {steps} steps",
                          extra={'case': case, 'seed': seed, 'event_type': 'fuzz_case', **details})

    def log_discrepancy(self, case: int, seed: int, move: str, **details):
        self.logger.error(f"fuzz case {case}: invariant changed after {move}",
                          extra={'case': case, 'seed': seed, 'move': move,
                                 'event_type': 'discrepancy', **details})

    def log_identity(self, identity: str, p: int, passed: bool):
        self.logger.log(logging.DEBUG if passed else logging.ERROR,
                        f"{identity} at p={p}: {'PASS' if passed else 'FAIL'}",
                        extra={'identity': identity, 'p': p, 'event_type': 'identity'})


def get_logger(name: str = 'qspine') -> InvariantLogger:
    return InvariantLogger(name)
