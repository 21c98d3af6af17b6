from fractions import Fraction

import pytest

from trlimits.algebra import INFINITY, ParamRational, Polynomial
from trlimits.errors import DomainError, InsufficientPrecisionError
from trlimits.series import (
    LaurentSeries,
    RationalFunction1V,
    expand_at,
    residue,
    series_reverse,
    series_rth_root,
)


def make_series(lo: int, *coeffs: int | Fraction, exact: bool = False) -> LaurentSeries:
    return LaurentSeries(lo, tuple(Fraction(c) for c in coeffs), exact=exact)


def make_rational(numerator: tuple, denominator: tuple = (1,)) -> RationalFunction1V:
    return RationalFunction1V(Polynomial(numerator), Polynomial(denominator))


def test_expand_simple_pole() -> None:
    f = make_rational((1,), (-1, 0, 1))
    series = expand_at(f, Fraction(1), (-1, 1))

    assert series.lo == -1
    assert series.hi == 1
    assert [series.coefficient(k) for k in (-1, 0, 1)] == [
        Fraction(1, 2),
        Fraction(-1, 4),
        Fraction(1, 8),
    ]


def test_expand_at_infinity_with_parameter() -> None:
    t = ParamRational.variable()
    f = make_rational((t, 0, 0, 1), (0, 1))
    series = f.expand_at(INFINITY, (-2, 1))

    assert series.coefficient(-2) == 1
    assert series.coefficient(-1) == 0
    assert series.coefficient(0) == 0
    assert series.coefficient(1) == t


def test_square_root_of_exact_series() -> None:
    root = make_series(2, 1, 1, exact=True).rth_root(2, terms=4)

    assert root.lo == 1
    assert list(root.coeffs) == [1, Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16)]


def test_series_operations_accept_exact_polynomials(monkeypatch) -> None:
    monkeypatch.delenv("TRLIMITS_SERIES_ORDER", raising=False)
    polynomial = make_series(2, 1, 1, exact=True)

    root = series_rth_root(polynomial, 2)
    assert root.lo == 1
    assert len(root.coeffs) == 8
    assert list(series_rth_root(polynomial, 2, terms=3).coeffs) == [1, Fraction(1, 2), Fraction(-1, 8)]

    reversed_series = series_reverse(make_series(1, 1, 1, exact=True), terms=5)
    assert [reversed_series.coefficient(k) for k in range(1, 6)] == [1, -1, 2, -5, 14]
    assert series_reverse(make_series(1, 1, 1, exact=True)).coefficient(4) == -5


def test_root_with_odd_leading_exponent_is_rejected() -> None:
    with pytest.raises(DomainError):
        series_rth_root(make_series(3, 1, 1), 2)


def test_reverse_matches_catalan_numbers() -> None:
    reversed_series = make_series(1, 1, 1, exact=True).reverse(terms=5)

    assert [reversed_series.coefficient(k) for k in range(1, 6)] == [1, -1, 2, -5, 14]


def test_reverse_is_a_compositional_inverse() -> None:
    series = make_series(1, 1, 1, exact=True)
    inverse = series.reverse(terms=6)
    composed = series.compose(inverse)

    assert composed.coefficient(1) == 1
    for k in range(2, 7):
        assert composed.coefficient(k) == 0


def test_reverse_of_truncated_series_keeps_its_window() -> None:
    reversed_series = series_reverse(make_series(1, 2, 4, 0))

    assert reversed_series.hi == 3
    assert reversed_series.coefficient(1) == Fraction(1, 2)
    assert reversed_series.coefficient(2) == Fraction(-1, 2)
    with pytest.raises(InsufficientPrecisionError):
        reversed_series.coefficient(4)


def test_residue_reads_the_minus_one_coefficient() -> None:
    assert residue(make_series(-1, 3, 5, exact=True)) == 3
    assert residue(make_series(0, 1, exact=True)) == 0


def test_residue_outside_window_raises() -> None:
    with pytest.raises(InsufficientPrecisionError):
        residue(make_series(-3, 1))


def test_window_is_never_silently_extended() -> None:
    series = make_series(0, 1, 2)

    assert series.coefficient(1) == 2
    with pytest.raises(InsufficientPrecisionError):
        series.coefficient(5)


def test_possibly_zero_series_has_no_valuation() -> None:
    series = make_series(0, 0, 0)

    assert series.is_possibly_zero()
    with pytest.raises(InsufficientPrecisionError):
        series.valuation()
    assert LaurentSeries.zero().valuation() == float("inf")


def test_product_window_follows_both_factors() -> None:
    product = make_series(-1, 1, 0, 0) * make_series(0, 1, 1)

    assert product.hi == 0
    assert product.coefficient(-1) == 1
    assert product.coefficient(0) == 1


def test_inverse_of_geometric_series() -> None:
    inverse = make_series(0, 1, -1, 0, 0, 0).inverse()

    assert list(inverse.coeffs) == [1, 1, 1, 1, 1]


def test_substitute_power_scales_the_window() -> None:
    substituted = make_series(0, 1, 1).substitute_power(2, 2)

    assert substituted.coefficient(2) == 2
    assert substituted.coefficient(3) == 0
    with pytest.raises(InsufficientPrecisionError):
        substituted.coefficient(4)


def test_rational_function_is_reduced_with_monic_denominator() -> None:
    f = make_rational((-2, 0, 2), (-2, 2))

    assert f.numerator == Polynomial((1, 1))
    assert f.denominator == Polynomial((1,))
    assert f.order_at(Fraction(-1)) == 1
    assert f.order_at(INFINITY) == -1


def test_rational_function_values() -> None:
    f = make_rational((1,), (0, 1))

    assert f(Fraction(2)) == Fraction(1, 2)
    assert f(Fraction(0)) is INFINITY
    assert f(INFINITY) == 0


def test_evaluate_series_composes_exactly() -> None:
    f = make_rational((1,), (0, 1))
    inner = make_series(0, 1, 1, 0, 0)
    value = f.evaluate_series(inner)

    assert [value.coefficient(k) for k in range(4)] == [1, -1, 1, -1]
