"""Rational functions of the global coordinate ``w`` and their local expansions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

import sympy

from trlimits.algebra.paramrational import ParamRational
from trlimits.algebra.polynomial import Polynomial
from trlimits.algebra.rational import INFINITY, as_scalar, divide, is_infinity
from trlimits.errors import DomainError

from .laurent import LaurentSeries

W = sympy.Symbol("w")


def taylor_shift(poly: Polynomial, center: Any) -> Polynomial:
    """``poly(center + u)`` as a polynomial in ``u``."""

    shifted = Polynomial(())
    step = Polynomial((as_scalar(center), Fraction(1)))
    for coeff in reversed(poly.coeffs):
        shifted = shifted * step + Polynomial((coeff,))
    return shifted


def _split_valuation(poly: Polynomial) -> tuple[int, Polynomial]:
    v = poly.valuation()
    return v, Polynomial(poly.coeffs[v:])


def _series_of_ratio(num: Polynomial, den: Polynomial, shift: int, hi: int) -> LaurentSeries:
    """``u**shift * num(u)/den(u)`` with ``num(0) den(0) != 0``, known up to ``hi``."""

    terms = hi - shift + 1
    if terms <= 0:
        return LaurentSeries.unknown_from(hi + 1)
    top = LaurentSeries(0, num.coeffs, exact=True)
    if den.degree == 0:
        return (top.scale(divide(1, den.coeffs[0]))).shift(shift).with_precision(hi)
    bottom = LaurentSeries(0, den.coeffs, exact=True).with_precision(terms - 1)
    return (top * bottom.inverse()).shift(shift).truncate(hi)


@dataclass(frozen=True, slots=True)
class RationalFunction1V:
    """``numerator / denominator`` in lowest terms with a monic denominator."""

    numerator: Polynomial
    denominator: Polynomial = Polynomial((Fraction(1),))

    def __post_init__(self) -> None:
        num, den = self.numerator, self.denominator
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero():
            num, den = Polynomial(()), Polynomial((Fraction(1),))
        else:
            common = num.gcd(den)
            if common.degree > 0:
                num = num.exact_div(common)
                den = den.exact_div(common)
            lead = den.leading()
            if lead != 1:
                num = num * divide(1, lead)
                den = den * divide(1, lead)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    # -- constructors -------------------------------------------------

    @classmethod
    def constant(cls, value: Any) -> "RationalFunction1V":
        return cls(Polynomial((as_scalar(value),)))

    @classmethod
    def variable(cls) -> "RationalFunction1V":
        return cls(Polynomial((Fraction(0), Fraction(1))))

    @classmethod
    def polynomial(cls, coeffs: Any) -> "RationalFunction1V":
        return cls(Polynomial(tuple(coeffs)))

    @classmethod
    def from_sympy(
        cls, expr: Any, field: Any = None, *, symbol: sympy.Symbol = W
    ) -> "RationalFunction1V":
        """Exact function from a sympy rational expression in ``symbol`` and ``t``."""

        from trlimits.algebra.text import sympy_to_scalar

        num, den = sympy.fraction(sympy.together(sympy.sympify(expr)))

        def poly(part: sympy.Expr) -> Polynomial:
            coeffs = sympy.Poly(sympy.expand(part), symbol).all_coeffs()
            return Polynomial(tuple(sympy_to_scalar(c, field) for c in reversed(coeffs)))

        return cls(poly(num), poly(den))

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: Any) -> "RationalFunction1V":
        other = _as_rf(other)
        return RationalFunction1V(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction1V":
        return RationalFunction1V(-self.numerator, self.denominator)

    def __sub__(self, other: Any) -> "RationalFunction1V":
        return self + (-_as_rf(other))

    def __rsub__(self, other: Any) -> "RationalFunction1V":
        return _as_rf(other) + (-self)

    def __mul__(self, other: Any) -> "RationalFunction1V":
        other = _as_rf(other)
        return RationalFunction1V(
            self.numerator * other.numerator, self.denominator * other.denominator
        )

    __rmul__ = __mul__

    def __truediv__(self, other: Any) -> "RationalFunction1V":
        other = _as_rf(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction1V(
            self.numerator * other.denominator, self.denominator * other.numerator
        )

    def __rtruediv__(self, other: Any) -> "RationalFunction1V":
        return _as_rf(other) / self

    def __pow__(self, exponent: int) -> "RationalFunction1V":
        if exponent < 0:
            return RationalFunction1V(self.denominator, self.numerator) ** (-exponent)
        return RationalFunction1V(self.numerator**exponent, self.denominator**exponent)

    def derivative(self) -> "RationalFunction1V":
        p, q = self.numerator, self.denominator
        return RationalFunction1V(p.derivative() * q - p * q.derivative(), q * q)

    def map_coefficients(self, func: Callable[[Any], Any]) -> "RationalFunction1V":
        return RationalFunction1V(
            self.numerator.map_coefficients(func), self.denominator.map_coefficients(func)
        )

    def compose_polynomial(self, inner: Polynomial) -> "RationalFunction1V":
        """``f(inner(w))`` for a polynomial ``inner``."""

        def horner(poly: Polynomial) -> Polynomial:
            acc = Polynomial(())
            for coeff in reversed(poly.coeffs):
                acc = acc * inner + Polynomial((coeff,))
            return acc

        return RationalFunction1V(horner(self.numerator), horner(self.denominator))

    # -- queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_constant(self) -> bool:
        return self.numerator.degree <= 0 and self.denominator.degree == 0

    def coefficients(self) -> tuple[Any, ...]:
        return self.numerator.coeffs + self.denominator.coeffs

    @property
    def degree(self) -> int:
        """Degree as a map ``P1 -> P1``."""

        return max(self.numerator.degree, self.denominator.degree, 0)

    def is_parametric(self) -> bool:
        return any(isinstance(c, ParamRational) for c in self.coefficients())

    def order_at(self, center: Any) -> int:
        """Order of vanishing at ``center`` (negative for poles)."""

        if self.is_zero():
            raise DomainError("the zero function has no order")
        if is_infinity(center):
            return self.denominator.degree - self.numerator.degree
        num = taylor_shift(self.numerator, center)
        den = taylor_shift(self.denominator, center)
        return num.valuation() - den.valuation()

    def __call__(self, value: Any) -> Any:
        """Exact value at a scalar or at ``INFINITY`` (``INFINITY`` at poles)."""

        if is_infinity(value):
            dp, dq = self.numerator.degree, self.denominator.degree
            if self.is_zero() or dp < dq:
                return Fraction(0)
            if dp > dq:
                return INFINITY
            return divide(self.numerator.leading(), self.denominator.leading())
        den = self.denominator(value)
        if den == 0:
            if self.numerator(value) == 0:
                raise DomainError("indeterminate value in a reduced rational function")
            return INFINITY
        return divide(self.numerator(value), den)

    # -- expansions ---------------------------------------------------

    def expand_at(self, center: Any, window: tuple[int, int] | int) -> LaurentSeries:
        """Laurent expansion in ``u = w - center`` (``u = 1/w`` at infinity) up to ``hi``."""

        hi = window[1] if isinstance(window, tuple) else window
        if self.is_zero():
            return LaurentSeries.zero()
        if is_infinity(center):
            p = self.numerator.reversed()
            q = self.denominator.reversed()
            vp, p = _split_valuation(p)
            vq, q = _split_valuation(q)
            shift = (self.denominator.degree - self.numerator.degree) + vp - vq
            return _series_of_ratio(p, q, shift, hi)
        vp, p = _split_valuation(taylor_shift(self.numerator, center))
        vq, q = _split_valuation(taylor_shift(self.denominator, center))
        return _series_of_ratio(p, q, vp - vq, hi)

    def evaluate_series(self, series: LaurentSeries) -> LaurentSeries:
        """``f(series)`` by Horner's rule; precision follows the series window."""

        def horner(poly: Polynomial) -> LaurentSeries:
            acc = LaurentSeries.zero()
            for coeff in reversed(poly.coeffs):
                acc = acc * series + LaurentSeries.constant(coeff)
            return acc

        top = horner(self.numerator)
        if self.denominator.degree == 0:
            return top.scale(divide(1, self.denominator.coeffs[0]))
        return top * horner(self.denominator).inverse()

    def to_sympy(self, symbol: sympy.Symbol = W) -> sympy.Expr:
        from trlimits.algebra.text import scalar_to_sympy

        def poly(p: Polynomial) -> sympy.Expr:
            return sympy.Add(*(scalar_to_sympy(c) * symbol**i for i, c in enumerate(p.coeffs)))

        return poly(self.numerator) / poly(self.denominator)

    def __repr__(self) -> str:
        return f"RationalFunction1V({sympy.sstr(self.to_sympy())})"


def _as_rf(value: Any) -> RationalFunction1V:
    if isinstance(value, RationalFunction1V):
        return value
    if isinstance(value, Polynomial):
        return RationalFunction1V(value)
    return RationalFunction1V.constant(value)


def expand_at(f: RationalFunction1V, center: Any, window: tuple[int, int] | int) -> LaurentSeries:
    return f.expand_at(center, window)


__all__ = ["RationalFunction1V", "W", "expand_at", "taylor_shift"]
