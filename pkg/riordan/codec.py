"""JSON and CSV formats for series, standard pairs and matrices.

Coefficients travel as strings "p/q" in lowest terms (integers without "/1").
Matrices are exported as full square arrays of rows; row i, column j of the
array is the entry l_{i+1, j+1}.  CSV output is decimal and therefore lossy.
"""

import json
from fractions import Fraction
from typing import Any, List

import mpmath
import pandas as pd

from .errors import InvalidMatrix, SeriesParseError
from .group import RiordanMatrixView, StandardPair
from .series import TruncatedSeries, to_mpf, variable


def format_coefficient(value: Fraction) -> str:
    return str(value)


def parse_coefficient(value: Any, index: int) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise SeriesParseError(f"expected a 'p/q' string, got {value!r}", index)
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise SeriesParseError(f"cannot read {value!r} as an exact rational", index)


def _coefficients_from(data: Any) -> List[Fraction]:
    if not isinstance(data, list) or not data:
        raise SeriesParseError("a series must be a non-empty JSON array")
    return [parse_coefficient(value, index) for index, value in enumerate(data)]


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise SeriesParseError(f"invalid JSON: {e.msg}", e.pos)


# ==================== SERIES ====================

def series_to_data(s: TruncatedSeries) -> List[str]:
    return [format_coefficient(c) for c in s.coefficients]


def series_to_json(s: TruncatedSeries) -> str:
    return json.dumps(series_to_data(s))


def series_from_data(data: Any) -> TruncatedSeries:
    return TruncatedSeries.of(_coefficients_from(data))


def series_from_json(text: str) -> TruncatedSeries:
    return series_from_data(_load(text))


# ==================== STANDARD PAIRS ====================

def pair_to_json(p: StandardPair) -> str:
    return json.dumps({"G": series_to_data(p.G_series), "F": series_to_data(p.F_series)})


def pair_from_json(text: str) -> StandardPair:
    """Read {"G": [...], "F": [...]}; a missing F means F(x) = x."""
    data = _load(text)
    if not isinstance(data, dict) or "G" not in data:
        raise SeriesParseError('a standard pair must be a JSON object with a "G" array')
    G = series_from_data(data["G"])
    F = series_from_data(data["F"]) if "F" in data else variable(G.order)
    return StandardPair(G_series=G, F_series=F)


# ==================== MATRICES ====================

def matrix_to_json(matrix: RiordanMatrixView) -> str:
    return json.dumps([[format_coefficient(c) for c in row] for row in matrix.full_rows()])


def matrix_from_json(text: str) -> RiordanMatrixView:
    data = _load(text)
    if not isinstance(data, list) or not data or not all(isinstance(row, list) for row in data):
        raise InvalidMatrix("a matrix must be a non-empty JSON array of rows")
    size = len(data)
    rows = []
    for n, row in enumerate(data):
        if len(row) != size:
            raise InvalidMatrix(f"row {n} has {len(row)} entries, expected {size}")
        try:
            rows.append([parse_coefficient(value, m) for m, value in enumerate(row)])
        except SeriesParseError as e:
            raise SeriesParseError(f"row {n}: {e.detail}")
    return RiordanMatrixView.from_array(rows)


def matrix_to_frame(matrix: RiordanMatrixView, digits: int, precision_bits: int) -> pd.DataFrame:
    with mpmath.workprec(precision_bits):
        values = [[mpmath.nstr(to_mpf(c), digits) for c in row] for row in matrix.full_rows()]
    labels = [str(m) for m in range(1, matrix.dimension + 1)]
    return pd.DataFrame(values, index=labels, columns=labels)


def matrix_to_csv(matrix: RiordanMatrixView, digits: int, precision_bits: int) -> str:
    return matrix_to_frame(matrix, digits, precision_bits).to_csv(index=False, header=False)


def matrix_to_table(matrix: RiordanMatrixView) -> str:
    """Plain-text rendering with exact entries."""
    labels = [str(m) for m in range(1, matrix.dimension + 1)]
    frame = pd.DataFrame(
        [[format_coefficient(c) if m <= n else "" for m, c in enumerate(row)]
         for n, row in enumerate(matrix.full_rows())],
        index=labels,
        columns=labels,
    )
    return frame.to_string()
