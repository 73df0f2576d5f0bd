import json
import logging
from contextlib import contextmanager
from enum import Enum
from pathlib import Path
from typing import List, Optional

import pandas as pd
import typer
from pydantic import BaseModel, Field, ValidationError, field_validator

from .codec import (
    format_coefficient,
    matrix_to_csv,
    matrix_to_json,
    matrix_to_table,
    pair_from_json,
    series_from_json,
)
from .config import configure_logging, get_settings
from .constants import (
    euler_convergence,
    euler_sweep,
    gamma_exact_partial,
    gamma_partial_sum,
    gamma_sweep,
    gregory_coefficients,
    kenter_gamma_triple,
    residue_cross_check,
)
from .errors import IdentityCheckFailed, RiordanError
from .group import (
    AppellElement,
    RiordanElement,
    RiordanMatrixView,
    StandardPair,
    appell_matrix,
    appell_power,
    from_standard,
    fundamental_product,
    group_inverse,
    matrix_multiply,
    standard_matrix,
    to_matrix,
)
from .reports import render_csv, render_json, render_table

logger = logging.getLogger(__name__)

app = typer.Typer(
    help="Exact Riordan arrays and matrix-product representations of gamma and e.",
    add_completion=False,
    no_args_is_help=True,
)


class OutputFormat(str, Enum):
    table = "table"
    json = "json"
    csv = "csv"


class Subcommand(str, Enum):
    gamma = "gamma"
    euler = "euler"
    gregory = "gregory"
    matrix = "matrix"
    product = "product"


# ==================== CONFIG ====================

class CliConfig(BaseModel):
    subcommand: Subcommand
    terms: int = Field(..., ge=1)  # matrix dimension for matrix/product
    precision_bits: int = Field(128, ge=64)
    digits: int = Field(20, ge=1)
    output_format: OutputFormat = OutputFormat.table
    output_path: Optional[Path] = None
    sweep: Optional[List[int]] = None
    per_term: bool = False

    @field_validator("sweep")
    @classmethod
    def strictly_increasing(cls, sweep):
        if sweep is None:
            return sweep
        if not sweep or sweep[0] < 1:
            raise ValueError("sweep values must be >= 1")
        if any(b <= a for a, b in zip(sweep, sweep[1:])):
            raise ValueError("sweep values must be strictly increasing")
        return sweep


def _parse_sweep(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise typer.BadParameter(f"--sweep expects comma-separated integers, got {text!r}")


def build_config(subcommand: Subcommand, terms: int, bits: Optional[int], digits: Optional[int],
                 output_format: OutputFormat, output: Optional[Path], sweep: Optional[str] = None,
                 per_term: bool = False) -> CliConfig:
    settings = get_settings()
    try:
        return CliConfig(
            subcommand=subcommand,
            terms=terms,
            precision_bits=bits if bits is not None else settings.precision_bits,
            digits=digits if digits is not None else settings.digits,
            output_format=output_format,
            output_path=output,
            sweep=_parse_sweep(sweep),
            per_term=per_term,
        )
    except ValidationError as e:
        problems = "; ".join(f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors())
        raise typer.BadParameter(problems)


@contextmanager
def domain_errors():
    """Report computation-domain errors and exit with their code."""
    try:
        yield
    except RiordanError as e:
        logger.error(f"{type(e).__name__}: {e.detail}")
        typer.echo(f"error: {e.detail}", err=True)
        raise typer.Exit(code=e.exit_code)


def emit(text: str, config: CliConfig) -> None:
    if config.output_path is not None:
        config.output_path.write_text(text if text.endswith("\n") else text + "\n")
        logger.info(f"Wrote {config.subcommand.value} output to {config.output_path}")
    else:
        typer.echo(text.rstrip("\n"))


def _render_reports(reports, config: CliConfig) -> str:
    if config.output_format == OutputFormat.json:
        return render_json(reports)
    if config.output_format == OutputFormat.csv:
        return render_csv(reports, config.digits)
    return render_table(reports, config.digits)


def _render_matrix(matrix: RiordanMatrixView, config: CliConfig) -> str:
    if config.output_format == OutputFormat.json:
        return matrix_to_json(matrix)
    if config.output_format == OutputFormat.csv:
        return matrix_to_csv(matrix, config.digits, config.precision_bits)
    return matrix_to_table(matrix)


# ==================== COMMANDS ====================

BitsOption = typer.Option(None, "--bits", help="Working precision in bits (>= 64).")
DigitsOption = typer.Option(None, "--digits", help="Significant digits in decimal output.")
FormatOption = typer.Option(OutputFormat.table, "--format", "-f")
OutputOption = typer.Option(None, "--output", "-o", help="Write to a file instead of stdout.")
SweepOption = typer.Option(None, "--sweep", help="Comma-separated, strictly increasing N values.")
PerTermOption = typer.Option(False, "--per-term", help="Include per-term contributions.")


@app.callback()
def main(log_level: Optional[str] = typer.Option(None, "--log-level", help="Logging level.")):
    configure_logging(log_level.upper() if log_level else None)


@app.command()
def gamma(
    terms: int = typer.Option(500, "--terms", "-n", help="Number of Gregory terms N."),
    bits: Optional[int] = BitsOption,
    digits: Optional[int] = DigitsOption,
    output_format: OutputFormat = FormatOption,
    output: Optional[Path] = OutputOption,
    sweep: Optional[str] = SweepOption,
    per_term: bool = PerTermOption,
    matrix_check: bool = typer.Option(False, "--matrix-check",
                                      help="Also evaluate the truncated matrix product and compare exactly."),
):
    """Partial sums of L_m / m against Euler's constant."""
    config = build_config(Subcommand.gamma, terms, bits, digits, output_format, output, sweep, per_term)
    with domain_errors():
        if config.sweep:
            reports = gamma_sweep(config.sweep, config.precision_bits, config.per_term)
        else:
            reports = [gamma_partial_sum(config.terms, config.precision_bits, config.per_term)]
        emit(_render_reports(reports, config), config)
        if matrix_check:
            n = reports[-1].term_count
            by_sum, _ = residue_cross_check(kenter_gamma_triple(max(n - 1, 1)), n - 1)
            if by_sum != gamma_exact_partial(n):
                raise IdentityCheckFailed(f"matrix product differs from the Gregory partial sum at N = {n}")
            typer.echo(f"matrix product check OK for N = {n}")


@app.command()
def euler(
    p: int = typer.Option(2, "-p", help="Row parameter p."),
    q: int = typer.Option(2, "-q", help="Column parameter q."),
    d: int = typer.Option(1, "-d", help="Matrix exponent d."),
    terms: int = typer.Option(60, "--terms", "-n", help="Highest index N kept."),
    bits: Optional[int] = BitsOption,
    digits: Optional[int] = DigitsOption,
    output_format: OutputFormat = FormatOption,
    output: Optional[Path] = OutputOption,
    sweep: Optional[str] = SweepOption,
    per_term: bool = PerTermOption,
):
    """Truncated matrix product against pq/(pq - 1) e^(d/p)."""
    config = build_config(Subcommand.euler, terms, bits, digits, output_format, output, sweep, per_term)
    with domain_errors():
        if config.sweep:
            reports = euler_sweep(p, q, d, config.sweep, config.precision_bits, config.per_term)
        else:
            reports = [euler_convergence(p, q, d, config.terms, config.precision_bits, config.per_term)]
        emit(_render_reports(reports, config), config)


@app.command()
def gregory(
    terms: int = typer.Option(10, "--terms", "-n", help="Highest index N."),
    output_format: OutputFormat = FormatOption,
    output: Optional[Path] = OutputOption,
    check: bool = typer.Option(False, "--check", help="Verify the recursion sum L_m/(n-m) = 0."),
):
    """Gregory coefficients L_0..L_N as exact rationals."""
    config = build_config(Subcommand.gregory, terms, None, None, output_format, output)
    with domain_errors():
        L = gregory_coefficients(config.terms)
        values = [format_coefficient(v) for v in L.values]
        if config.output_format == OutputFormat.json:
            text = json.dumps(values)
        else:
            frame = pd.DataFrame({"n": range(len(values)), "L_n": values})
            text = frame.to_csv(index=False) if config.output_format == OutputFormat.csv else frame.to_string(index=False)
        emit(text, config)
        if check:
            failed = L.failed_recursion_indices()
            if failed:
                raise IdentityCheckFailed(f"recursion FAILED for n = {failed}")
            if config.terms < 2:
                typer.echo("recursion has no indices to check below n = 2")
            else:
                typer.echo(f"recursion OK for n = 2..{config.terms}")


@app.command()
def matrix(
    series_file: Path = typer.Argument(..., exists=True, dir_okay=False, readable=True,
                                       help="JSON array of 'p/q' strings: f, or G with --standard."),
    g_file: Optional[Path] = typer.Option(None, "--g", exists=True, dir_okay=False, readable=True,
                                          help="Second series: g, or F with --standard. Defaults to x."),
    standard: bool = typer.Option(False, "--standard", help="Read the series as [G, F]."),
    dim: int = typer.Option(..., "--dim", help="Matrix dimension N."),
    invert: bool = typer.Option(False, "--invert", help="Render the inverse matrix."),
    bits: Optional[int] = BitsOption,
    digits: Optional[int] = DigitsOption,
    output_format: OutputFormat = FormatOption,
    output: Optional[Path] = OutputOption,
):
    """Render the N x N Riordan matrix of a series (pair)."""
    if standard and g_file is None:
        raise typer.BadParameter("--standard reads a pair [G, F] and needs --g for F")
    config = build_config(Subcommand.matrix, dim, bits, digits, output_format, output)
    with domain_errors():
        first = series_from_json(series_file.read_text())
        if g_file is None:
            t = AppellElement(t=first)
            view = appell_power(t, -1, config.terms) if invert else appell_matrix(t, config.terms)
        else:
            second = series_from_json(g_file.read_text())
            if standard:
                element = from_standard(StandardPair(G_series=first, F_series=second))
            else:
                element = RiordanElement(f=first, g=second)
            if invert:
                element = group_inverse(element)
            view = to_matrix(element, config.terms)
        emit(_render_matrix(view, config), config)


@app.command()
def product(
    pair1: Path = typer.Argument(..., exists=True, dir_okay=False, readable=True,
                                 help='JSON object {"G": [...], "F": [...]}.'),
    pair2: Path = typer.Argument(..., exists=True, dir_okay=False, readable=True),
    dim: int = typer.Option(..., "--dim", help="Matrix dimension N."),
    verify: bool = typer.Option(False, "--verify", help="Compare with the explicit matrix product."),
    bits: Optional[int] = BitsOption,
    digits: Optional[int] = DigitsOption,
    output_format: OutputFormat = FormatOption,
    output: Optional[Path] = OutputOption,
):
    """Matrix of [G1, F1][G2, F2] from the standard-pair product law."""
    config = build_config(Subcommand.product, dim, bits, digits, output_format, output)
    with domain_errors():
        p1 = pair_from_json(pair1.read_text())
        p2 = pair_from_json(pair2.read_text())
        view = standard_matrix(fundamental_product(p1, p2), config.terms)
        if verify:
            explicit = matrix_multiply(standard_matrix(p1, config.terms), standard_matrix(p2, config.terms))
            if explicit != view:
                raise IdentityCheckFailed("product law disagrees with the explicit matrix product")
            logger.info(f"Product law verified at dimension {config.terms}")
        emit(_render_matrix(view, config), config)
