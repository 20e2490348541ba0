"""Exception hierarchy shared by every module."""

from __future__ import annotations


class EqcalcError(Exception):
    """Base class for all errors raised by the library."""


class ValidationError(EqcalcError):
    """A structure failed one of its defining axioms.

    ``details`` carries a small machine-readable record of the first
    violation found (for example the offending triple of elements).
    """

    def __init__(self, message: str, details: dict | None = None) -> None:
        super().__init__(message)
        self.details = dict(details or {})


class InvalidInputError(EqcalcError):
    """User supplied input that cannot be parsed or is out of range."""


class SizeBoundError(EqcalcError):
    """A documented size bound was exceeded.

    ``partial`` holds whatever output was computed before the bound hit.
    """

    def __init__(self, message: str, partial: object = None) -> None:
        super().__init__(message)
        self.partial = partial


class PreconditionError(EqcalcError):
    """Input is well formed but violates a precondition of the operation."""
