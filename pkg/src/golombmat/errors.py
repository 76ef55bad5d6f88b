"""Exception hierarchy shared by every module.

Precondition failures map to CLI exit code 2, numerical failures to 3.
"""

from __future__ import annotations


class GolombMatError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class PreconditionError(GolombMatError, ValueError):
    exit_code = 2


class NumericalFailureError(GolombMatError, ArithmeticError):
    exit_code = 3


class InvalidModulusError(PreconditionError):
    pass


class NotInvertibleAtZeroError(PreconditionError):
    pass


class InsufficientPrimitivesError(PreconditionError):
    pass


class NotPrimitiveError(PreconditionError):
    pass


class NotCoprimeError(PreconditionError):
    pass


class ZeroSequenceError(PreconditionError):
    pass


class NoCompanionError(PreconditionError):
    pass


class OracleTooLargeError(PreconditionError):
    pass


class DimensionError(PreconditionError):
    pass


class InsufficientDataError(PreconditionError):
    pass
