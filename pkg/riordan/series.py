"""Exact arithmetic on truncated formal power series with rational coefficients.

A ``TruncatedSeries`` stores the prefix f_0, ..., f_N of a formal power series.
Coefficients of x^(N+1) and beyond are unknown rather than zero, so every
binary operation returns the smaller of its operand orders.
"""

import logging
from enum import Enum
from fractions import Fraction
from typing import Any, Callable, Iterable, List, Tuple, Union

import mpmath
from mpmath.libmp import from_rational, round_nearest
from pydantic import BaseModel, ConfigDict, field_validator

from .errors import (
    InvalidParameters,
    NonzeroConstantTerm,
    NotInK,
    OrderMismatch,
    ZeroConstantTerm,
)

logger = logging.getLogger(__name__)

Coefficient = Fraction
Scalar = Union[Fraction, int]


class SeriesClass(str, Enum):
    H = "H"
    K = "K"
    V = "V"
    GENERAL = "general"


# ==================== MODELS ====================

def to_coefficient(value: Any) -> Fraction:
    if isinstance(value, float):
        raise ValueError(f"float coefficient {value!r} is not exact; pass an int, Fraction or 'p/q' string")
    return Fraction(value)


class TruncatedSeries(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    coefficients: Tuple[Fraction, ...]

    @field_validator("coefficients", mode="before")
    @classmethod
    def exact_coefficients(cls, value):
        if isinstance(value, (str, bytes)):
            raise ValueError("coefficients must be a sequence, not a string")
        values = tuple(value)
        if not values:
            raise ValueError("a truncated series keeps at least its constant term")
        return tuple(to_coefficient(v) for v in values)

    @classmethod
    def of(cls, values: Iterable[Any]) -> "TruncatedSeries":
        return cls(coefficients=tuple(values))

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, n):
        return self.coefficients[n]

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(self.coefficients)

    def __str__(self):
        return "[" + ", ".join(str(c) for c in self.coefficients) + "]"

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return add(self, other)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return subtract(self, other)

    def __neg__(self) -> "TruncatedSeries":
        return negate(self)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return multiply(self, other)
        if isinstance(other, (int, Fraction)):
            return scale(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scale(self, other)
        return NotImplemented

    def __pow__(self, exponent: int) -> "TruncatedSeries":
        return power(self, exponent)


def _series(values: Iterable[Fraction]) -> TruncatedSeries:
    # internal results are already exact Fractions
    return TruncatedSeries.model_construct(coefficients=tuple(values))


# ==================== CONSTRUCTORS ====================

def zero(order: int) -> TruncatedSeries:
    """o(x) = 0, the identity of V."""
    return _series(Fraction(0) for _ in range(order + 1))


def one(order: int) -> TruncatedSeries:
    """e(x) = 1, the identity of H."""
    return _series([Fraction(1)] + [Fraction(0)] * order)


def variable(order: int) -> TruncatedSeries:
    """id(x) = x, the identity of K."""
    if order < 1:
        raise OrderMismatch("id(x) needs order >= 1")
    return _series([Fraction(0), Fraction(1)] + [Fraction(0)] * (order - 1))


def from_function(coefficient: Callable[[int], Any], order: int) -> TruncatedSeries:
    return _series(to_coefficient(coefficient(n)) for n in range(order + 1))


def truncate(s: TruncatedSeries, order: int) -> TruncatedSeries:
    if order > s.order:
        raise OrderMismatch(f"cannot extend a series of order {s.order} to order {order}")
    if order < 0:
        raise OrderMismatch("truncation order must be non-negative")
    return _series(s.coefficients[:order + 1])


# ==================== CLASSIFICATION ====================

def classify(s: TruncatedSeries) -> SeriesClass:
    c = s.coefficients
    if c[0] != 0:
        return SeriesClass.H
    if s.order == 0:
        # x^1 is not stored, K versus V cannot be told apart
        return SeriesClass.GENERAL
    return SeriesClass.K if c[1] != 0 else SeriesClass.V


def require_h(s: TruncatedSeries, name: str = "series") -> None:
    if s.coefficients[0] == 0:
        raise ZeroConstantTerm(f"{name} must have a nonzero constant term (class H) at index 0")


def require_v(s: TruncatedSeries, name: str = "series") -> None:
    if s.coefficients[0] != 0:
        raise NonzeroConstantTerm(f"{name} must have a zero constant term at index 0, got {s.coefficients[0]}")


def require_k(s: TruncatedSeries, name: str = "series") -> None:
    c = s.coefficients
    if c[0] != 0:
        raise NotInK(f"{name} is not in K: constant term at index 0 is {c[0]}, expected 0")
    if s.order < 1 or c[1] == 0:
        raise NotInK(f"{name} is not in K: linear coefficient at index 1 must be nonzero")


# ==================== RING OPERATIONS ====================

def add(s1: TruncatedSeries, s2: TruncatedSeries) -> TruncatedSeries:
    return _series(a + b for a, b in zip(s1.coefficients, s2.coefficients))


def negate(s: TruncatedSeries) -> TruncatedSeries:
    return _series(-c for c in s.coefficients)


def subtract(s1: TruncatedSeries, s2: TruncatedSeries) -> TruncatedSeries:
    return _series(a - b for a, b in zip(s1.coefficients, s2.coefficients))


def scale(s: TruncatedSeries, factor: Scalar) -> TruncatedSeries:
    factor = Fraction(factor)
    return _series(factor * c for c in s.coefficients)


def multiply(s1: TruncatedSeries, s2: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product, truncated to the smaller order."""
    order = min(s1.order, s2.order)
    f, g = s1.coefficients, s2.coefficients
    product: List[Fraction] = []
    for n in range(order + 1):
        total = Fraction(0)
        for m in range(n + 1):
            if f[m] and g[n - m]:
                total += f[m] * g[n - m]
        product.append(total)
    return _series(product)


def reciprocal(s: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse 1/f, solving sum_m f_m (1/f)_(n-m) = [n = 0] row by row."""
    require_h(s)
    f = s.coefficients
    inverse = [1 / f[0]]
    for n in range(1, s.order + 1):
        total = Fraction(0)
        for m in range(1, n + 1):
            if f[m]:
                total += f[m] * inverse[n - m]
        inverse.append(-total * inverse[0])
    return _series(inverse)


def power(s: TruncatedSeries, exponent: int) -> TruncatedSeries:
    """Integer power; negative exponents go through the reciprocal."""
    if exponent < 0:
        return power(reciprocal(s), -exponent)
    result = one(s.order)
    base = s
    while exponent:
        if exponent & 1:
            result = multiply(result, base)
        exponent >>= 1
        if exponent:
            base = multiply(base, base)
    return result


# ==================== COMPOSITION ====================

def compose(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """f(g(x)) by Horner accumulation; g must have a zero constant term."""
    require_v(g, "inner series")
    order = min(f.order, g.order)
    inner = truncate(g, order)
    result = _series([f[order]] + [Fraction(0)] * order)
    for k in range(order - 1, -1, -1):
        shifted = multiply(result, inner).coefficients
        result = _series((shifted[0] + f[k],) + shifted[1:])
    return result


def compositional_inverse(g: TruncatedSeries) -> TruncatedSeries:
    """The series g-bar with g(g-bar(x)) = g-bar(g(x)) = x.

    Solves the implicit triangular system g-bar_1 = 1/g_1 and, for n >= 2,
    sum_{m=1}^{n} g-bar_m [x^n] g^m = 0, where [x^n] g^n = g_1^n.
    """
    require_k(g)
    order = g.order
    powers = [one(order)]
    for _ in range(order):
        powers.append(multiply(powers[-1], g))
    inverse = [Fraction(0), 1 / g[1]]
    for n in range(2, order + 1):
        total = Fraction(0)
        for m in range(1, n):
            total += inverse[m] * powers[m][n]
        inverse.append(-total / powers[n][n])
    return _series(inverse)


# ==================== FLOATING EVALUATION ====================

def to_mpf(value: Any):
    """Round an exact rational once to the working precision of mpmath."""
    if not isinstance(value, (int, Fraction)):
        return mpmath.mpf(value)
    value = Fraction(value)
    return mpmath.mp.make_mpf(
        from_rational(value.numerator, value.denominator, mpmath.mp.prec, round_nearest)
    )


def eval_float(s: TruncatedSeries, x: Any, precision_bits: int):
    """Horner evaluation of the truncated polynomial at x, carried at precision_bits."""
    if precision_bits < 64:
        raise InvalidParameters(f"precision_bits must be >= 64, got {precision_bits}")
    with mpmath.workprec(precision_bits):
        point = to_mpf(x)
        total = mpmath.mpf(0)
        for c in reversed(s.coefficients):
            total = total * point + to_mpf(c)
        return +total
