"""
Typed exceptions for the pcf library and CLI.

Explicit exception types let us:
- Map failures to stable CLI exit codes.
- Keep log lines short and actionable.
- Write precise tests (e.g., expect PoleInC, AccuracyLoss).
"""

from __future__ import annotations

from typing import Any, Mapping, Optional


class PcfError(Exception):
    """Base class for all custom errors raised by pcf."""


class ConfigLoadError(PcfError):
    """Raised when a configuration file is missing, unreadable, or invalid."""


class DomainError(PcfError):
    """Raised when a quantity is requested outside the sub-domain where it is defined."""


class PoleInC(PcfError):
    """Raised when the lower parameter of 1F1 is a non-positive integer."""


class Pole(PcfError):
    """Raised when a gamma function argument sits on a pole."""


class NonConvergence(PcfError):
    """Raised when a series or an iteration does not settle within its budget."""


# The Maclaurin solver reports the same condition under this name.
NoConvergence = NonConvergence


class TooCloseToTurningPoint(PcfError):
    """Raised when coefficient formulas that divide by powers of zeta are used near zeta = 0."""


class _DiagnosticError(PcfError):
    def __init__(self, message: str, diagnostics: Optional[Mapping[str, Any]] = None):
        super().__init__(message)
        self.diagnostics: dict[str, Any] = dict(diagnostics or {})


class AccuracyLoss(_DiagnosticError):
    """Raised when cancellation leaves too few trustworthy digits."""


class Unsupported(_DiagnosticError):
    """Raised when no evaluation method can serve a parameter pair."""


class InternalError(PcfError):
    """Raised for unexpected internal failures (e.g., a recursion that should be exact is not)."""
