"""Utility modules for qspine: errors and structured logging."""

from .error_handler import QSpineError, ErrorContext
from .structured_logging import get_logger, InvariantLogger, setup_structured_logging

__all__ = [
    'QSpineError',
    'ErrorContext',
    'get_logger',
    'InvariantLogger',
    'setup_structured_logging',
]
