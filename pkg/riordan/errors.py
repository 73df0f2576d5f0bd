"""Errors raised by the series, group and constants modules.

Every error carries a human readable ``detail`` and the process ``exit_code``
the command line uses when it surfaces the error.
"""

from typing import Optional


class RiordanError(Exception):
    """Base class for computation-domain errors."""

    exit_code = 3

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class ZeroConstantTerm(RiordanError):
    """A series outside H (zero constant term) where H is required."""


class NonzeroConstantTerm(RiordanError):
    """A series outside V (nonzero constant term) where V is required."""


class NotInK(RiordanError):
    """A series that is not in K: g(0) != 0 or g'(0) = 0."""


class OrderMismatch(RiordanError):
    """Operands whose truncation orders cannot be combined."""


class DimensionMismatch(RiordanError):
    pass


class InvalidParameters(RiordanError):
    pass


class InvalidMatrix(RiordanError):
    """A matrix that is not lower-triangular with a nonzero diagonal."""


class SeriesParseError(RiordanError):
    def __init__(self, detail: str, index: Optional[int] = None):
        if index is not None:
            detail = f"{detail} (at index {index})"
        super().__init__(detail)
        self.index = index


class IdentityCheckFailed(RiordanError):
    pass
