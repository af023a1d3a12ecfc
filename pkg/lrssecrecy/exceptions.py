"""Exceptions raised by the lrssecrecy package."""

from __future__ import annotations

from typing import Any


class LrsSecrecyError(Exception):
    """Base class for every error raised by this package."""


class DomainError(LrsSecrecyError, ValueError):
    """An argument lies outside the domain of a function."""


class ChannelError(LrsSecrecyError, ValueError):
    """The requested scenario has no valid equivalent-channel model."""


class NumericalError(LrsSecrecyError, ArithmeticError):
    """A series, quadrature or inversion did not reach its tolerance."""


class InversionError(NumericalError):
    """Numerical Laplace inversion failed its error check."""

    def __init__(self, message: str, **diagnostics: Any) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics

    def __str__(self) -> str:
        details = ", ".join(f"{k}={v!r}" for k, v in self.diagnostics.items())
        base = super().__str__()
        return f"{base} ({details})" if details else base


class ConfigValidationError(LrsSecrecyError):
    """User supplied configuration failed schema validation."""
