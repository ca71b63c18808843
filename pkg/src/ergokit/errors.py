"""Exception hierarchy.

Every error carries a ``code`` (the class name) so the CLI can emit a
single machine-parseable prefix.
"""

from __future__ import annotations


class ErgokitError(ValueError):
    exit_code = 1

    @property
    def code(self) -> str:
        return type(self).__name__


class NotHermitian(ErgokitError):
    pass


class NotUnitary(ErgokitError):
    pass


class DimensionMismatch(ErgokitError):
    pass


class LengthMismatch(ErgokitError):
    pass


class InvalidState(ErgokitError):
    pass


class InvalidSpectrum(ErgokitError):
    pass


class InvalidBlochParameters(ErgokitError):
    pass


class NotEquispaced(ErgokitError):
    pass


class EntropyOutOfRange(ErgokitError):
    pass


class DegenerateSpectrum(ErgokitError):
    pass


class StructureMismatch(ErgokitError):
    pass


class WrongDimension(ErgokitError):
    pass


class InvalidCoefficients(ErgokitError):
    pass


class NotPure(ErgokitError):
    pass


class WcfRequiresTripartite(ErgokitError):
    pass


class ParseError(ErgokitError):
    def __init__(self, message: str, position: int | None = None):
        super().__init__(message if position is None else f"{message} (at position {position})")
        self.position = position


class NoConvergence(ErgokitError, ArithmeticError):
    exit_code = 2


class UsageError(ErgokitError):
    pass
