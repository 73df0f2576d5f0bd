"""The Riordan group G = H x| K, its action on V and its matrix representation.

An element is a pair (f, g) with f in H and g in K.  It acts on V by
(f, g) * h = f . (h o g-bar), and column m of its matrix holds the
coefficients of f . g-bar^m on the basis x, x^2, x^3, ...  Matrix indices are
1-based as in that basis; storage is 0-based.
"""

import logging
from fractions import Fraction
from typing import Any, List, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from .errors import DimensionMismatch, InvalidMatrix, OrderMismatch
from .series import (
    TruncatedSeries,
    compose,
    compositional_inverse,
    multiply,
    one,
    power,
    reciprocal,
    require_h,
    require_k,
    require_v,
    to_coefficient,
    variable,
)

logger = logging.getLogger(__name__)


# ==================== MODELS ====================

class RiordanElement(BaseModel):
    """A pair (f, g) of equal truncation order with f in H and g in K."""

    model_config = ConfigDict(frozen=True)

    f: TruncatedSeries
    g: TruncatedSeries

    @model_validator(mode="after")
    def check_membership(self):
        require_h(self.f, "f")
        require_k(self.g, "g")
        if self.f.order != self.g.order:
            raise OrderMismatch(f"f has order {self.f.order} but g has order {self.g.order}")
        return self

    @property
    def order(self) -> int:
        return self.f.order

    @classmethod
    def identity(cls, order: int) -> "RiordanElement":
        return cls(f=one(order), g=variable(order))

    @classmethod
    def appell(cls, t: TruncatedSeries) -> "RiordanElement":
        """The pair (t, x)."""
        return cls(f=t, g=variable(t.order))


class AppellElement(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: TruncatedSeries

    @model_validator(mode="after")
    def check_membership(self):
        require_h(self.t, "t")
        return self

    @property
    def order(self) -> int:
        return self.t.order

    def element(self) -> RiordanElement:
        return RiordanElement.appell(self.t)


class StandardPair(BaseModel):
    """[G(x), F(x)] in the usual notation, i.e. the element (G, F-bar)."""

    model_config = ConfigDict(frozen=True)

    G_series: TruncatedSeries
    F_series: TruncatedSeries

    @model_validator(mode="after")
    def check_membership(self):
        require_h(self.G_series, "G")
        require_k(self.F_series, "F")
        if self.G_series.order != self.F_series.order:
            raise OrderMismatch(
                f"G has order {self.G_series.order} but F has order {self.F_series.order}"
            )
        return self

    @property
    def order(self) -> int:
        return self.G_series.order


class RiordanMatrixView(BaseModel):
    """N x N lower-triangular truncation; rows[n - 1] holds l_{n,1}, ..., l_{n,n}."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    rows: Tuple[Tuple[Fraction, ...], ...]

    @field_validator("rows", mode="before")
    @classmethod
    def exact_rows(cls, value):
        return tuple(tuple(to_coefficient(entry) for entry in row) for row in value)

    @model_validator(mode="after")
    def check_shape(self):
        if not self.rows:
            raise InvalidMatrix("a matrix view needs dimension >= 1")
        for n, row in enumerate(self.rows, start=1):
            if len(row) != n:
                raise InvalidMatrix(f"row {n} must hold {n} entries, got {len(row)}")
            if row[-1] == 0:
                raise InvalidMatrix(f"diagonal entry ({n}, {n}) is zero")
        return self

    @property
    def dimension(self) -> int:
        return len(self.rows)

    def entry(self, n: int, m: int) -> Fraction:
        if not (1 <= n <= self.dimension and 1 <= m <= self.dimension):
            raise IndexError(f"entry ({n}, {m}) outside a {self.dimension} x {self.dimension} view")
        return self.rows[n - 1][m - 1] if m <= n else Fraction(0)

    def column(self, m: int) -> List[Fraction]:
        return [self.entry(n, m) for n in range(1, self.dimension + 1)]

    def diagonal(self) -> List[Fraction]:
        return [row[-1] for row in self.rows]

    def as_array(self) -> np.ndarray:
        array = np.full((self.dimension, self.dimension), Fraction(0), dtype=object)
        for n, row in enumerate(self.rows):
            array[n, :n + 1] = row
        return array

    def full_rows(self) -> List[List[Fraction]]:
        return [list(row) for row in self.as_array()]

    @classmethod
    def from_array(cls, array: Any) -> "RiordanMatrixView":
        array = np.asarray(array, dtype=object)
        if array.ndim != 2 or array.shape[0] != array.shape[1]:
            raise InvalidMatrix(f"expected a square matrix, got shape {array.shape}")
        size = array.shape[0]
        for n in range(size):
            for m in range(n + 1, size):
                if array[n, m] != 0:
                    raise InvalidMatrix(f"entry ({n + 1}, {m + 1}) above the diagonal is nonzero")
        return cls(rows=[array[n, :n + 1] for n in range(size)])


# ==================== GROUP LAW ====================

def phi(g: TruncatedSeries, f: TruncatedSeries) -> TruncatedSeries:
    """The automorphism phi_g of H: f -> f o g-bar."""
    return compose(f, compositional_inverse(g))


def group_multiply(e1: RiordanElement, e2: RiordanElement) -> RiordanElement:
    """(f1, g1) * (f2, g2) = (f1 . phi_g1(f2), g1 o g2)."""
    if e1.order != e2.order:
        raise OrderMismatch(f"cannot multiply elements of order {e1.order} and {e2.order}")
    return RiordanElement(f=multiply(e1.f, phi(e1.g, e2.f)), g=compose(e1.g, e2.g))


def group_inverse(e: RiordanElement) -> RiordanElement:
    """((1/f) o g, g-bar)."""
    return RiordanElement(f=compose(reciprocal(e.f), e.g), g=compositional_inverse(e.g))


def act(e: RiordanElement, h: TruncatedSeries) -> TruncatedSeries:
    require_v(h, "h")
    return multiply(e.f, compose(h, compositional_inverse(e.g)))


# ==================== MATRICES ====================

def to_matrix(e: RiordanElement, dimension: int) -> RiordanMatrixView:
    """pi(f, g) truncated to dimension x dimension; column m is f . g-bar^m."""
    if dimension < 1 or dimension > e.order:
        raise OrderMismatch(f"an element of order {e.order} renders dimensions 1..{e.order}, not {dimension}")
    g_bar = compositional_inverse(e.g)
    columns = []
    current = e.f
    for _ in range(dimension):
        current = multiply(current, g_bar)
        columns.append(current.coefficients)
    rows = [[columns[m - 1][n] for m in range(1, n + 1)] for n in range(1, dimension + 1)]
    logger.debug(f"Rendered Riordan matrix of dimension {dimension}")
    return RiordanMatrixView(rows=rows)


def appell_matrix(t: AppellElement, dimension: int) -> RiordanMatrixView:
    """Toeplitz matrix with entry (n, m) = t_{n-m}."""
    if dimension < 1 or t.order < dimension - 1:
        raise OrderMismatch(f"an Appell series of order {t.order} cannot fill dimension {dimension}")
    c = t.t.coefficients
    return RiordanMatrixView(rows=[[c[n - m] for m in range(1, n + 1)] for n in range(1, dimension + 1)])


def appell_power(t: AppellElement, d: int, dimension: int) -> RiordanMatrixView:
    """pi(t, x)^d, computed as the Toeplitz matrix of the series t^d."""
    return appell_matrix(AppellElement(t=power(t.t, d)), dimension)


def matrix_vector_product(matrix: RiordanMatrixView, vector: Sequence[Any]) -> List[Fraction]:
    if len(vector) != matrix.dimension:
        raise DimensionMismatch(
            f"vector of length {len(vector)} does not match dimension {matrix.dimension}"
        )
    v = [to_coefficient(x) for x in vector]
    return [sum((l * x for l, x in zip(row, v)), Fraction(0)) for row in matrix.rows]


def matrix_multiply(left: RiordanMatrixView, right: RiordanMatrixView) -> RiordanMatrixView:
    if left.dimension != right.dimension:
        raise DimensionMismatch(f"cannot multiply dimensions {left.dimension} and {right.dimension}")
    return RiordanMatrixView.from_array(left.as_array() @ right.as_array())


def appell_right_product(matrix: RiordanMatrixView, t: AppellElement) -> RiordanMatrixView:
    """matrix . pi(t, x) from the closed form sum_{p=m}^{n} l_{n,p} t_{p-m}."""
    size = matrix.dimension
    if t.order < size - 1:
        raise OrderMismatch(f"an Appell series of order {t.order} cannot fill dimension {size}")
    c = t.t.coefficients
    rows = []
    for n in range(1, size + 1):
        rows.append([
            sum((matrix.entry(n, p) * c[p - m] for p in range(m, n + 1)), Fraction(0))
            for m in range(1, n + 1)
        ])
    return RiordanMatrixView(rows=rows)


# ==================== STANDARD NOTATION ====================

def from_standard(p: StandardPair) -> RiordanElement:
    """[G, F] = pi(G, F-bar)."""
    return RiordanElement(f=p.G_series, g=compositional_inverse(p.F_series))


def to_standard(e: RiordanElement) -> StandardPair:
    return StandardPair(G_series=e.f, F_series=compositional_inverse(e.g))


def standard_matrix(p: StandardPair, dimension: int) -> RiordanMatrixView:
    return to_matrix(from_standard(p), dimension)


def fundamental_product(p1: StandardPair, p2: StandardPair) -> StandardPair:
    """[G1, F1] [G2, F2] = [G1 . (G2 o F1), F2 o F1]."""
    if p1.order != p2.order:
        raise OrderMismatch(f"cannot multiply pairs of order {p1.order} and {p2.order}")
    return StandardPair(
        G_series=multiply(p1.G_series, compose(p2.G_series, p1.F_series)),
        F_series=compose(p2.F_series, p1.F_series),
    )
