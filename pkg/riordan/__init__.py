"""Exact truncated power series, the Riordan group and matrix-product
representations of Euler's constant gamma and of e."""

from .errors import (
    DimensionMismatch,
    IdentityCheckFailed,
    InvalidMatrix,
    InvalidParameters,
    NonzeroConstantTerm,
    NotInK,
    OrderMismatch,
    RiordanError,
    SeriesParseError,
    ZeroConstantTerm,
)
from .series import SeriesClass, TruncatedSeries

__version__ = "1.0.0"
