"""
Error Handling Module

This module provides the exception hierarchy used across qspine:
- A base error carrying a message plus a details dictionary
- Specific exception types for arithmetic, parsing, topology and resource errors
- A process exit code per error family, consumed by the CLI
- An ErrorContext manager that ties failures into structured logging

Exit code families:
    1 - usage or parse error
    2 - mathematical refusal (hypothesis not met, resource guard)
    3 - verification or fuzz failure
    4 - internal error (an invariant the theory guarantees did not hold)
"""

import logging
import time
from typing import Any, Optional

logger = logging.getLogger(__name__)


EXIT_USAGE = 1
EXIT_REFUSAL = 2
EXIT_FAILURE = 3
EXIT_INTERNAL = 4


# ============================================================================
# Exception Hierarchy
# ============================================================================

class QSpineError(Exception):
    """Base exception for all qspine errors"""

    exit_code = EXIT_INTERNAL

    def __init__(self, message: str, details: Optional[dict] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self):
        if self.details:
            detail_str = ", ".join(f"{k}={v}" for k, v in self.details.items())
            return f"{self.message} ({detail_str})"
        return self.message


def _details(**kwargs: Any) -> dict:
    return {k: v for k, v in kwargs.items() if v is not None}


# ---------------------------------------------------------------- arithmetic

class NotPrime(QSpineError):
    """The modulus is not a prime number"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, p: Optional[int] = None):
        super().__init__(message, _details(p=p))


class PrimeTooSmall(QSpineError):
    """The prime is below the supported range (p >= 5)"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, p: Optional[int] = None):
        super().__init__(message, _details(p=p))


class DenominatorDivisibleByP(QSpineError):
    """A coefficient is not p-local"""

    def __init__(self, message: str, p: Optional[int] = None,
                 coefficient: Optional[str] = None):
        super().__init__(message, _details(p=p, coefficient=coefficient))


class MixedPrime(QSpineError):
    """Arithmetic between elements of rings for different primes"""

    def __init__(self, message: str, left: Optional[int] = None,
                 right: Optional[int] = None):
        super().__init__(message, _details(left=left, right=right))


class NotDivisibleInR(QSpineError):
    """An exact division leaves the p-local ring"""

    def __init__(self, message: str, p: Optional[int] = None,
                 operation: Optional[str] = None):
        super().__init__(message, _details(p=p, operation=operation))


class DivisionByZero(QSpineError):
    """Division by the zero element"""

    def __init__(self, message: str, p: Optional[int] = None):
        super().__init__(message, _details(p=p))


class NDivisibleByP(QSpineError):
    """The closed-form Gauss sum evaluation needs n coprime to p"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, n: Optional[int] = None,
                 p: Optional[int] = None):
        super().__init__(message, _details(n=n, p=p))


class DegenerateConstant(QSpineError):
    """X^2 or C+- vanishes, so the category cannot normalize invariants"""

    def __init__(self, message: str, constant: Optional[str] = None,
                 p: Optional[int] = None):
        super().__init__(message, _details(constant=constant, p=p))


# ------------------------------------------------------------------ parsing

class ParseError(QSpineError):
    """Malformed presentation or link text"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, position: Optional[int] = None,
                 text: Optional[str] = None):
        self.position = position
        super().__init__(message, _details(
            position=position,
            text=text[:60] if text else None,
        ))


class UnknownGenerator(ParseError):
    """A relator mentions a generator that was not declared"""

    def __init__(self, message: str, name: Optional[str] = None,
                 position: Optional[int] = None):
        self.name = name
        super().__init__(message, position=position)
        if name is not None:
            self.details['name'] = name


# ----------------------------------------------------------------- topology

class InvalidMove(QSpineError):
    """An Andrews-Curtis move whose preconditions fail"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, move: Optional[str] = None):
        super().__init__(message, _details(move=move))


class ChiTooSmall(QSpineError):
    """The homology formula only holds for Euler characteristic >= 1"""

    exit_code = EXIT_REFUSAL

    def __init__(self, message: str, chi: Optional[int] = None):
        self.chi = chi
        super().__init__(message, _details(chi=chi))


class IndexOutOfRange(QSpineError):
    """A letter or component index outside the diagram"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, index: Optional[int] = None,
                 size: Optional[int] = None):
        super().__init__(message, _details(index=index, size=size))


class NotSymmetric(QSpineError):
    """A linking matrix that is not symmetric"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, shape: Optional[tuple] = None):
        super().__init__(message, _details(shape=shape))


# -------------------------------------------------------------------- skein

class WidthMismatch(QSpineError):
    """Temperley-Lieb elements of different widths were combined"""

    def __init__(self, message: str, left: Optional[int] = None,
                 right: Optional[int] = None):
        super().__init__(message, _details(left=left, right=right))


class ColorOutOfRange(QSpineError):
    """A color that is not a label of the category"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, color: Optional[int] = None,
                 p: Optional[int] = None):
        super().__init__(message, _details(color=color, p=p))


class CableTooWide(QSpineError):
    """The cabled diagram exceeds the configured width guard"""

    exit_code = EXIT_REFUSAL

    def __init__(self, message: str, width: Optional[int] = None,
                 guard: Optional[int] = None):
        self.width = width
        self.guard = guard
        super().__init__(message, _details(width=width, guard=guard))


# ---------------------------------------------------------------------- app

class ConfigurationError(QSpineError):
    """Configuration validation or loading errors"""

    exit_code = EXIT_USAGE

    def __init__(self, message: str, config_key: Optional[str] = None):
        super().__init__(message, _details(config_key=config_key))


class SchemaValidationError(QSpineError):
    """A report does not validate against the shipped JSON schema"""

    def __init__(self, message: str, path: Optional[str] = None):
        super().__init__(message, _details(path=path))


# ============================================================================
# Error Context Manager
# ============================================================================

class ErrorContext:
    """
    Context manager for consistent error handling and logging.

    Usage:
        >>> with ErrorContext("Evaluating link", p=5, components=3):
        ...     value = evaluator.Z(link)

    This will:
    1. Log entry to the operation
    2. Log failures with context and traceback, then re-raise
    3. Log exit with timing information
    """

    def __init__(self, operation: str, **context):
        self.operation = operation
        self.context = context
        self.start_time: Optional[float] = None

    def __enter__(self):
        self.start_time = time.time()
        logger.debug(f"Starting: {self.operation}", extra=self.context)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        duration = time.time() - (self.start_time or 0)

        if exc_type is None:
            logger.debug(
                f"Completed: {self.operation} ({duration:.2f}s)",
                extra={'duration': duration, **self.context}
            )
        elif issubclass(exc_type, QSpineError) and exc_type.exit_code != EXIT_INTERNAL:
            # expected refusals and input errors: no traceback
            logger.warning(
                f"Refused: {self.operation} ({duration:.2f}s): {exc_val}",
                extra={'duration': duration, 'error_type': exc_type.__name__,
                       **self.context}
            )
        else:
            logger.error(
                f"Failed: {self.operation} ({duration:.2f}s): {exc_val}",
                extra={
                    'duration': duration,
                    'error_type': exc_type.__name__,
                    **self.context
                },
                exc_info=True
            )

        return False
