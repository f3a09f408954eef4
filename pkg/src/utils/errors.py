"""Domain Errors - One exception family for the whole optimizer

Self-Explanatory: Every failure the library can report has a named type here.
How: Library code logs the event with structlog, then raises one of these.
The CLI (src/main.py) maps each type to its own exit code.
"""

from typing import Any, Dict, Optional


class OptimizationError(Exception):
    """Base class for every error raised by this package"""


class InvalidArgumentError(OptimizationError, ValueError):
    """Bad shapes, out-of-bounds vectors, undersized samples"""


class UnsupportedProblemError(OptimizationError, LookupError):
    """Unknown benchmark problem id"""


class NumericalFailureError(OptimizationError, ArithmeticError):
    """Covariance factorization failed even after jitter escalation"""

    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.diagnostics = dict(diagnostics or {})

    def __str__(self) -> str:
        base = super().__str__()
        if not self.diagnostics:
            return base
        details = ", ".join(f"{k}={v}" for k, v in sorted(self.diagnostics.items()))
        return f"{base} ({details})"


class BudgetExceededError(OptimizationError):
    """An expensive evaluation was requested with no budget left"""


class ConfigError(OptimizationError, ValueError):
    """Invalid configuration; `key` names the offending entry"""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message)
        self.key = key


class ResultsIOError(OptimizationError, OSError):
    """Results directory or record file could not be read or written"""
