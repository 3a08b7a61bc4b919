"""Exception hierarchy shared by every layer of the toolkit."""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all errors raised by nodalquintic."""


class DomainError(ToolkitError, TypeError):
    """Operands live in different coefficient domains."""


class ParameterError(ToolkitError, ValueError):
    """An argument is outside the documented range (bad prime, precision, ...)."""


class PrecisionError(ToolkitError, ArithmeticError):
    """Not enough p-adic precision to carry out the requested operation."""


class DegenerateError(ToolkitError, ValueError):
    """Input sits on a degenerate locus the operation refuses to handle."""


class NonSmoothError(DegenerateError):
    """A specialization of the quintic is singular."""


class Reject(ToolkitError):
    """A candidate specialization fails a condition.

    ``stage`` names the failing condition (``"ii"``, ``"iii"``, ...) and
    ``reason`` is a short machine-readable tag.
    """

    def __init__(self, stage: str, reason: str, detail: str = ""):
        self.stage = stage
        self.reason = reason
        self.detail = detail
        super().__init__(f"stage {stage}: {reason}" + (f" ({detail})" if detail else ""))


class BadPositionError(ToolkitError):
    """A point lies in a residue disc the logarithm code does not handle."""
