"""Matrix-product representations of Euler's constant gamma and of e.

For series a, b, c with nonzero constant terms and an integer d, the product

    (a_0 a_1 ...) . pi(b, x)^d . (c_0 c_1 ...)^T

equals sum_n a_n f_n with f = b^d c.  Both sides are computed exactly at a
finite truncation.  Closed forms come from mpmath at a higher working
precision; the residue itself is never integrated numerically.

Convergence of a, b, c and b^d on |x| < 1 is the caller's responsibility.
"""

import logging
import math
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import mpmath
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .config import get_settings
from .errors import DimensionMismatch, IdentityCheckFailed, InvalidParameters, OrderMismatch
from .group import AppellElement, appell_power, matrix_vector_product
from .reports import ConvergenceReport
from .series import (
    TruncatedSeries,
    from_function,
    multiply,
    power,
    reciprocal,
    require_h,
    to_mpf,
    truncate,
)

logger = logging.getLogger(__name__)


# ==================== MODELS ====================

class KenterTriple(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: TruncatedSeries
    b: TruncatedSeries
    c: TruncatedSeries
    d: int

    @model_validator(mode="after")
    def check_series(self):
        require_h(self.a, "a")
        require_h(self.b, "b")
        require_h(self.c, "c")
        if not self.a.order == self.b.order == self.c.order:
            raise OrderMismatch(
                f"a, b, c must share one order, got {self.a.order}, {self.b.order}, {self.c.order}"
            )
        return self

    @property
    def order(self) -> int:
        return self.a.order

    def truncated(self, order: int) -> "KenterTriple":
        return KenterTriple(a=truncate(self.a, order), b=truncate(self.b, order),
                            c=truncate(self.c, order), d=self.d)


class GregoryCoefficients(BaseModel):
    """L_0, ..., L_N with x / log(1 - x) = sum L_n x^n."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    values: Tuple[Fraction, ...]

    @field_validator("values")
    @classmethod
    def check_leading(cls, values):
        if len(values) < 2 or values[0] != -1 or values[1] != Fraction(1, 2):
            raise ValueError("Gregory coefficients start with L_0 = -1, L_1 = 1/2")
        return values

    @property
    def order(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n):
        return self.values[n]

    def recursion_residual(self, n: int) -> Fraction:
        """sum_{m=0}^{n-1} L_m / (n - m), zero for every n >= 2."""
        return sum((self.values[m] / (n - m) for m in range(n)), Fraction(0))

    def failed_recursion_indices(self) -> List[int]:
        return [n for n in range(2, self.order + 1) if self.recursion_residual(n) != 0]


# ==================== SERIES FAMILIES ====================

def harmonic_series(order: int) -> TruncatedSeries:
    """-log(1 - x) / x = 1 + x/2 + x^2/3 + ..."""
    if order < 0:
        raise InvalidParameters(f"order must be >= 0, got {order}")
    return from_function(lambda n: Fraction(1, n + 1), order)


@lru_cache(maxsize=8)
def gregory_coefficients(order: int) -> GregoryCoefficients:
    if order < 1:
        raise InvalidParameters(f"Gregory coefficients need order >= 1, got {order}")
    logger.info(f"Computing Gregory coefficients through L_{order}")
    inverse = reciprocal(harmonic_series(order))
    return GregoryCoefficients(values=tuple(-c for c in inverse.coefficients))


def kenter_gamma_triple(order: int) -> KenterTriple:
    """a = b = -log(1 - x)/x, c = (a - 1)/x, d = -1."""
    if order < 1:
        raise InvalidParameters(f"order must be >= 1, got {order}")
    a = harmonic_series(order)
    c = from_function(lambda n: Fraction(1, n + 2), order)
    return KenterTriple(a=a, b=a, c=c, d=-1)


def _check_euler(p: int, q: int) -> None:
    if p == 0 or q == 0:
        raise InvalidParameters(f"p and q must be nonzero, got p={p}, q={q}")
    if p * q <= 1:
        raise InvalidParameters(f"the representation needs p*q > 1, got p*q = {p * q}")


def euler_triple(p: int, q: int, d: int, order: int) -> KenterTriple:
    """a = 1/(1 - x/p), b = e^x, c = 1/(1 - x/q)."""
    _check_euler(p, q)
    return KenterTriple(
        a=from_function(lambda n: Fraction(1, p ** n), order),
        b=from_function(lambda n: Fraction(1, math.factorial(n)), order),
        c=from_function(lambda n: Fraction(1, q ** n), order),
        d=d,
    )


# ==================== MAIN IDENTITY ====================

def kenter_series(t: KenterTriple) -> TruncatedSeries:
    """f(x) = b(x)^d c(x)."""
    return multiply(power(t.b, t.d), t.c)


def _check_terms(t: KenterTriple, terms: int) -> None:
    if terms < 0 or terms > t.order:
        raise DimensionMismatch(f"terms must lie in 0..{t.order}, got {terms}")


def kenter_terms(t: KenterTriple, terms: int) -> List[Fraction]:
    """The contributions a_n f_n for n = 0..terms."""
    _check_terms(t, terms)
    short = t.truncated(terms)
    f = kenter_series(short)
    return [a * fn for a, fn in zip(short.a.coefficients, f.coefficients)]


def kenter_sum(t: KenterTriple, terms: int) -> Fraction:
    return sum(kenter_terms(t, terms), Fraction(0))


def kenter_matrix_product(t: KenterTriple, terms: int) -> Fraction:
    """Row . pi(b, x)^d . column with the (terms + 1)-dimensional truncation."""
    _check_terms(t, terms)
    size = terms + 1
    matrix = appell_power(AppellElement(t=truncate(t.b, terms)), t.d, size)
    column = matrix_vector_product(matrix, t.c.coefficients[:size])
    return sum((a * w for a, w in zip(t.a.coefficients, column)), Fraction(0))


def residue_cross_check(t: KenterTriple, terms: int) -> Tuple[Fraction, Fraction]:
    """Both evaluations of the truncated residue; they must agree exactly."""
    by_sum = kenter_sum(t, terms)
    by_matrix = kenter_matrix_product(t, terms)
    if by_sum != by_matrix:
        raise IdentityCheckFailed(f"coefficient sum {by_sum} differs from matrix product {by_matrix}")
    return by_sum, by_matrix


# ==================== ORACLES ====================

def _check_bits(precision_bits: int) -> None:
    if precision_bits < 64:
        raise InvalidParameters(f"precision_bits must be >= 64, got {precision_bits}")

def _resolve_bits(precision_bits: Optional[int]) -> int:
    if precision_bits is None:
        return get_settings().precision_bits
    _check_bits(precision_bits)
    return precision_bits



def gamma_oracle(precision_bits: int):
    _check_bits(precision_bits)
    with mpmath.workprec(precision_bits * get_settings().oracle_factor):
        value = +mpmath.euler
    with mpmath.workprec(precision_bits):
        return +value


def exp_oracle(x: Fraction, precision_bits: int):
    _check_bits(precision_bits)
    with mpmath.workprec(precision_bits * get_settings().oracle_factor):
        value = mpmath.exp(to_mpf(Fraction(x)))
    with mpmath.workprec(precision_bits):
        return +value


def euler_target(p: int, q: int, d: int, precision_bits: int):
    """pq / (pq - 1) * e^(d/p)."""
    _check_euler(p, q)
    _check_bits(precision_bits)
    ratio = Fraction(p * q, p * q - 1)
    with mpmath.workprec(precision_bits * get_settings().oracle_factor):
        value = to_mpf(ratio) * mpmath.exp(to_mpf(Fraction(d, p)))
    with mpmath.workprec(precision_bits):
        # the exponential factor is 1 when d = 0
        return to_mpf(ratio) if d == 0 else +value


def euler_limit_form(p: int, q: int, d: int, n: int, precision_bits: int):
    """pq / (pq - 1) * (1 + 1/(pn))^(dn), which tends to euler_target as n grows."""
    _check_euler(p, q)
    _check_bits(precision_bits)
    if n < 1:
        raise InvalidParameters(f"n must be >= 1, got {n}")
    with mpmath.workprec(precision_bits):
        base = to_mpf(1 + Fraction(1, p * n))
        return to_mpf(Fraction(p * q, p * q - 1)) * mpmath.power(base, d * n)


# ==================== CONVERGENCE RUNS ====================

def _validate_sweep(sweep: Sequence[int]) -> List[int]:
    points = list(sweep)
    if not points or points[0] < 1:
        raise InvalidParameters("sweep points must be >= 1")
    if any(b <= a for a, b in zip(points, points[1:])):
        raise InvalidParameters(f"sweep points must be strictly increasing, got {points}")
    return points


def _report(label: str, term_count: int, contributions: Sequence[Fraction], target, precision_bits: int,
            per_term: bool) -> ConvergenceReport:
    exact = sum(contributions, Fraction(0))
    per_term_values = None
    with mpmath.workprec(precision_bits):
        partial_value = to_mpf(exact)
        if per_term:
            cap = get_settings().per_term_cap
            if len(contributions) > cap:
                logger.warning(f"Per-term list for {label} truncated to the first {cap} of {len(contributions)} terms")
            per_term_values = [to_mpf(c) for c in contributions[:cap]]
    return ConvergenceReport(
        label=label,
        term_count=term_count,
        partial_value=partial_value,
        target=target,
        precision_bits=precision_bits,
        terms=per_term_values,
    )


def _gregory_contributions(terms: int) -> List[Fraction]:
    L = gregory_coefficients(terms)
    return [L[m] / m for m in range(1, terms + 1)]


def gamma_exact_partial(terms: int) -> Fraction:
    """sum_{m=1}^{terms} L_m / m as an exact rational."""
    if terms < 1:
        raise InvalidParameters(f"terms must be >= 1, got {terms}")
    return sum(_gregory_contributions(terms), Fraction(0))


def gamma_partial_sum(terms: int, precision_bits: Optional[int] = None,
                      per_term: bool = False) -> ConvergenceReport:
    """sum_{m=1}^{terms} L_m / m against gamma."""
    precision_bits = _resolve_bits(precision_bits)
    if terms < 1:
        raise InvalidParameters(f"terms must be >= 1, got {terms}")
    target = gamma_oracle(precision_bits)
    return _report("gamma", terms, _gregory_contributions(terms), target, precision_bits, per_term)


def gamma_sweep(sweep: Sequence[int], precision_bits: Optional[int] = None,
                per_term: bool = False) -> List[ConvergenceReport]:
    precision_bits = _resolve_bits(precision_bits)
    points = _validate_sweep(sweep)
    target = gamma_oracle(precision_bits)
    contributions = _gregory_contributions(points[-1])
    logger.info(f"Gamma sweep over {len(points)} points up to N = {points[-1]}")
    return [_report("gamma", n, contributions[:n], target, precision_bits, per_term) for n in points]


def _euler_label(p: int, q: int, d: int) -> str:
    return f"euler p={p} q={q} d={d}"


def euler_convergence(p: int, q: int, d: int, terms: int, precision_bits: Optional[int] = None,
                      per_term: bool = False) -> ConvergenceReport:
    """Truncated matrix product for e against pq/(pq - 1) e^(d/p).

    ``terms`` is the highest index kept, so the report sums terms + 1 products.
    """
    precision_bits = _resolve_bits(precision_bits)
    target = euler_target(p, q, d, precision_bits)
    contributions = kenter_terms(euler_triple(p, q, d, terms), terms)
    return _report(_euler_label(p, q, d), terms, contributions, target, precision_bits, per_term)


def euler_sweep(p: int, q: int, d: int, sweep: Sequence[int], precision_bits: Optional[int] = None,
                per_term: bool = False) -> List[ConvergenceReport]:
    precision_bits = _resolve_bits(precision_bits)
    points = _validate_sweep(sweep)
    target = euler_target(p, q, d, precision_bits)
    contributions = kenter_terms(euler_triple(p, q, d, points[-1]), points[-1])
    logger.info(f"Euler sweep ({p}, {q}, {d}) over {len(points)} points up to N = {points[-1]}")
    return [
        _report(_euler_label(p, q, d), n, contributions[:n + 1], target, precision_bits, per_term)
        for n in points
    ]
