from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from pydantic import ValidationError

from riordan.constants import (
    GregoryCoefficients,
    KenterTriple,
    euler_convergence,
    euler_limit_form,
    euler_sweep,
    euler_target,
    euler_triple,
    exp_oracle,
    gamma_exact_partial,
    gamma_oracle,
    gamma_partial_sum,
    gamma_sweep,
    gregory_coefficients,
    harmonic_series,
    kenter_gamma_triple,
    kenter_matrix_product,
    kenter_series,
    kenter_sum,
    kenter_terms,
    residue_cross_check,
)
from riordan.errors import DimensionMismatch, InvalidParameters, OrderMismatch, ZeroConstantTerm
from riordan.reports import render_csv, render_json, render_table
from riordan.series import TruncatedSeries, add, multiply, one, to_mpf, variable

from .strategies import h_series

S = TruncatedSeries.of

# L_1 .. L_7
GREGORY = [
    Fraction(1, 2),
    Fraction(1, 12),
    Fraction(1, 24),
    Fraction(19, 720),
    Fraction(3, 160),
    Fraction(863, 60480),
    Fraction(275, 24192),
]


def triples(order=10):
    return st.builds(
        lambda a, b, c, d: KenterTriple(a=a, b=b, c=c, d=d),
        h_series(order), h_series(order), h_series(order), st.integers(-2, 2),
    )


class TestGregoryCoefficients:
    def test_harmonic_series(self):
        assert harmonic_series(3) == S(["1", "1/2", "1/3", "1/4"])

    def test_leading_values(self):
        L = gregory_coefficients(7)
        assert L[0] == -1
        assert list(L.values[1:]) == GREGORY

    def test_recursion_through_200(self):
        L = gregory_coefficients(200)
        assert L.failed_recursion_indices() == []
        assert L.recursion_residual(2) == 0

    def test_positive_after_the_constant(self):
        assert all(v > 0 for v in gregory_coefficients(60).values[1:])

    def test_rejects_wrong_leading_values(self):
        with pytest.raises(ValidationError):
            GregoryCoefficients(values=(Fraction(1), Fraction(1, 2)))

    def test_needs_order_one(self):
        with pytest.raises(InvalidParameters):
            gregory_coefficients(0)


class TestKenterTriple:
    def test_gamma_triple_shift(self):
        t = kenter_gamma_triple(8)
        assert t.d == -1
        assert t.a == t.b == harmonic_series(8)
        # a = 1 + x c through order 8
        assert add(one(8), multiply(variable(8), t.c)) == t.a

    def test_needs_h_series(self):
        with pytest.raises(ZeroConstantTerm):
            KenterTriple(a=S([0, 1]), b=S([1, 1]), c=S([1, 1]), d=1)

    def test_needs_equal_orders(self):
        with pytest.raises(OrderMismatch):
            KenterTriple(a=S([1, 1]), b=S([1, 1, 1]), c=S([1, 1]), d=1)

    def test_euler_triple(self):
        t = euler_triple(2, 3, 1, 3)
        assert t.a == S(["1", "1/2", "1/4", "1/8"])
        assert t.b == S(["1", "1", "1/2", "1/6"])
        assert t.c == S(["1", "1/3", "1/9", "1/27"])

    @pytest.mark.parametrize("p, q", [(0, 2), (2, 0), (1, 1), (-1, 1), (-2, 3)])
    def test_euler_triple_rejects(self, p, q):
        with pytest.raises(InvalidParameters):
            euler_triple(p, q, 1, 5)


class TestMatrixProductIdentity:
    def test_gamma_triple_at_six(self):
        expected = sum((L / m for m, L in enumerate(GREGORY, start=1)), Fraction(0))
        assert kenter_matrix_product(kenter_gamma_triple(6), 6) == expected
        assert kenter_sum(kenter_gamma_triple(6), 6) == expected

    def test_gamma_triple_matches_gregory_partial_sum(self):
        assert residue_cross_check(kenter_gamma_triple(12), 12) == (gamma_exact_partial(13),) * 2

    @pytest.mark.parametrize("d", [-2, -1, 0, 1, 2])
    def test_constant_ones(self, d):
        unit = one(5)
        t = KenterTriple(a=unit, b=unit, c=unit, d=d)
        assert kenter_sum(t, 5) == kenter_matrix_product(t, 5) == 1

    @pytest.mark.parametrize("d", [-2, -1, 0, 1, 2])
    def test_unit_b_reduces_to_dot_product(self, d):
        a = S([1, 2, 3, 4])
        c = S([1, "1/2", "1/3", "1/4"])
        t = KenterTriple(a=a, b=one(3), c=c, d=d)
        assert kenter_matrix_product(t, 3) == 1 + 1 + 1 + 1

    @pytest.mark.parametrize("p, q, d", [(2, 2, 1), (2, 3, -1), (3, 2, 2), (-2, -3, 1)])
    def test_euler_cross_check(self, p, q, d):
        by_sum, by_matrix = residue_cross_check(euler_triple(p, q, d, 12), 12)
        assert by_sum == by_matrix

    def test_geometric_case(self):
        t = euler_triple(2, 3, 0, 10)
        assert kenter_sum(t, 10) == sum(Fraction(1, 6 ** n) for n in range(11))

    def test_terms_bounded_by_order(self):
        with pytest.raises(DimensionMismatch):
            kenter_sum(euler_triple(2, 2, 1, 5), 6)
        with pytest.raises(DimensionMismatch):
            kenter_matrix_product(euler_triple(2, 2, 1, 5), -1)

    def test_terms_are_a_times_f(self):
        t = euler_triple(2, 2, 1, 4)
        f = kenter_series(t)
        assert kenter_terms(t, 4) == [a * fn for a, fn in zip(t.a.coefficients, f.coefficients)]

    @settings(max_examples=50)
    @given(triples())
    def test_sum_equals_matrix_product(self, t):
        assert kenter_sum(t, 10) == kenter_matrix_product(t, 10)

    @settings(max_examples=25)
    @given(triples(), st.integers(0, 10))
    def test_sum_equals_matrix_product_below_order(self, t, terms):
        assert kenter_sum(t, terms) == kenter_matrix_product(t, terms)


class TestOracles:
    def test_gamma_digits(self):
        assert mpmath.nstr(gamma_oracle(128), 20).startswith("0.5772156649")

    def test_e_digits(self):
        assert mpmath.nstr(exp_oracle(Fraction(1), 128), 20).startswith("2.7182818284")

    def test_rejects_low_precision(self):
        with pytest.raises(InvalidParameters):
            gamma_oracle(32)

    def test_geometric_target_is_exact(self):
        with mpmath.workprec(128):
            assert euler_target(2, 3, 0, 128) == to_mpf(Fraction(6, 5))

    def test_euler_target(self):
        with mpmath.workprec(128):
            expected = to_mpf(Fraction(4, 3)) * mpmath.exp(to_mpf(Fraction(1, 2)))
            assert abs(euler_target(2, 2, 1, 128) - expected) < mpmath.mpf(10) ** -35

    def test_limit_form_approaches_target(self):
        target = euler_target(2, 2, 1, 128)
        errors = [abs(euler_limit_form(2, 2, 1, n, 128) - target) for n in (10, 100, 1000)]
        assert errors[0] > errors[1] > errors[2]
        assert abs(euler_limit_form(2, 2, 1, 10 ** 6, 128) - target) < 1e-5

    def test_limit_form_rejects_non_positive_n(self):
        with pytest.raises(InvalidParameters):
            euler_limit_form(2, 2, 1, 0, 128)


class TestEulerConvergence:
    def test_forty_terms(self):
        report = euler_convergence(2, 2, 1, 40, 128)
        assert report.term_count == 40
        assert report.abs_error < 1e-10

    @pytest.mark.parametrize("p, q, d", [(2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, -1)])
    def test_acceptance_grid(self, p, q, d):
        assert euler_convergence(p, q, d, 80, 128).abs_error < 1e-15

    def test_negative_parameters(self):
        assert euler_convergence(-2, -3, 1, 80, 128).abs_error < 1e-15

    @pytest.mark.parametrize("d", [1, 2, 3])
    def test_error_shrinks(self, d):
        assert euler_convergence(2, 2, d, 20, 128).abs_error < euler_convergence(2, 2, d, 10, 128).abs_error

    @pytest.mark.parametrize("p, q, d", [(2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, -1)])
    def test_error_ratio_over_ten_terms(self, p, q, d):
        ratio = euler_convergence(p, q, d, 20, 128).abs_error / euler_convergence(p, q, d, 10, 128).abs_error
        assert ratio < mpmath.mpf(1) / (p * q) ** 5

    def test_sweep_matches_single_runs(self):
        reports = euler_sweep(2, 3, 1, [5, 10, 20], 128)
        assert [r.term_count for r in reports] == [5, 10, 20]
        for report in reports:
            assert report.partial_value == euler_convergence(2, 3, 1, report.term_count, 128).partial_value

    def test_precision_scaling_keeps_digits(self):
        low = euler_convergence(2, 2, 1, 60, 128)
        high = euler_convergence(2, 2, 1, 60, 256)
        with mpmath.workprec(256):
            assert abs(low.partial_value - high.partial_value) < mpmath.mpf(10) ** -36

    def test_rejects_invalid_parameters(self):
        with pytest.raises(InvalidParameters):
            euler_convergence(1, 1, 1, 10, 128)

    @pytest.mark.parametrize("bits", [0, 32])
    def test_rejects_low_precision(self, bits):
        with pytest.raises(InvalidParameters):
            euler_convergence(2, 2, 1, 10, bits)
        with pytest.raises(InvalidParameters):
            euler_sweep(2, 2, 1, [5, 10], bits)


class TestGammaConvergence:
    def test_single_term(self):
        report = gamma_partial_sum(1, 128)
        assert report.partial_value == mpmath.mpf(0.5)
        assert abs(report.abs_error - 0.0772156649) < 1e-9

    def test_five_hundred_terms(self):
        assert gamma_partial_sum(500, 128).abs_error < 1e-3

    def test_sweep_is_monotone(self):
        reports = gamma_sweep([25, 50, 100, 200, 250, 500], 128)
        by_n = {r.term_count: r for r in reports}
        for n in (25, 50, 100, 250):
            assert by_n[2 * n].abs_error < by_n[n].abs_error
        values = [r.partial_value for r in reports]
        assert values == sorted(values)
        assert all(v < r.target for v, r in zip(values, reports))

    def test_rejects_zero_terms(self):
        with pytest.raises(InvalidParameters):
            gamma_partial_sum(0, 128)

    @pytest.mark.parametrize("bits", [0, 32])
    def test_rejects_low_precision(self, bits):
        with pytest.raises(InvalidParameters):
            gamma_partial_sum(5, bits)
        with pytest.raises(InvalidParameters):
            gamma_sweep([5, 10], bits)

    @pytest.mark.parametrize("sweep", [[10, 10], [20, 10], [0, 5], []])
    def test_rejects_bad_sweeps(self, sweep):
        with pytest.raises(InvalidParameters):
            gamma_sweep(sweep, 128)


class TestReports:
    def test_payload(self):
        payload = gamma_partial_sum(3, 128, per_term=True).to_payload()
        assert set(payload) == {"label", "terms", "partial_value", "target", "abs_error", "per_term"}
        assert payload["terms"] == 3
        assert payload["per_term"][0] == "0.5"

    def test_per_term_is_capped(self, fresh_settings):
        fresh_settings.setenv("RIORDAN_PER_TERM_CAP", "5")
        report = gamma_partial_sum(20, 128, per_term=True)
        assert len(report.terms) == 5

    def test_renderers(self):
        reports = gamma_sweep([1, 2, 3], 128)
        assert "abs_error" in render_table(reports, 10)
        assert len(render_csv(reports, 10).strip().splitlines()) == 4
        assert render_json(reports).startswith("[")
        assert render_json(reports[:1]).startswith("{")
