"""Rational functions of the family parameter ``t`` with exact coefficients.

Values are kept in lowest terms with a monic denominator, so two instances are
equal exactly when they represent the same function. Results that do not depend
on ``t`` collapse to plain scalars, mirroring how :class:`FieldElement` collapses
to ``Fraction``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

import sympy

from trlimits.errors import DomainError

from .numberfield import FieldElement
from .polynomial import (
    PolyCoeffs,
    padd,
    peval,
    pexact_div,
    pgcd,
    pmul,
    pneg,
    pscale,
    pvaluation,
    strip,
)
from .rational import as_scalar, divide

T = sympy.Symbol("t")


def _is_plain(value: Any) -> bool:
    return isinstance(value, (int, Fraction, FieldElement)) and not isinstance(value, bool)


def make_param(numerator: PolyCoeffs, denominator: PolyCoeffs) -> Any:
    """Canonical value of ``numerator / denominator`` (a scalar when constant)."""

    num = strip(numerator)
    den = strip(denominator)
    if not den:
        raise ZeroDivisionError("rational function with zero denominator")
    if not num:
        return Fraction(0)
    common = pgcd(num, den)
    if len(common) > 1:
        num = pexact_div(num, common)
        den = pexact_div(den, common)
    lead = den[-1]
    if lead != 1:
        inv = divide(1, lead)
        num = pscale(num, inv)
        den = pscale(den, inv)
    if len(den) == 1 and len(num) == 1:
        return num[0]
    return ParamRational(num, den, _canonical=True)


class ParamRational:
    """An element of K(t) that genuinely depends on ``t``."""

    __slots__ = ("numerator", "denominator", "_hash")

    def __init__(
        self, numerator: PolyCoeffs, denominator: PolyCoeffs = (Fraction(1),), *, _canonical: bool = False
    ) -> None:
        if not _canonical:
            value = make_param(numerator, denominator)
            if not isinstance(value, ParamRational):
                raise DomainError("constant rational function; use the scalar instead")
            numerator, denominator = value.numerator, value.denominator
        self.numerator: PolyCoeffs = tuple(numerator)
        self.denominator: PolyCoeffs = tuple(denominator)
        self._hash: int | None = None

    @classmethod
    def variable(cls) -> "ParamRational":
        return cls((Fraction(0), Fraction(1)), (Fraction(1),), _canonical=True)

    @staticmethod
    def polynomial(coeffs: PolyCoeffs) -> Any:
        return make_param(coeffs, (Fraction(1),))

    # -- arithmetic ---------------------------------------------------

    @staticmethod
    def _parts(value: Any) -> tuple[PolyCoeffs, PolyCoeffs] | None:
        if isinstance(value, ParamRational):
            return value.numerator, value.denominator
        if _is_plain(value):
            return strip((as_scalar(value),)), (Fraction(1),)
        return None

    def __add__(self, other: Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        num, den = parts
        if den == self.denominator:
            return make_param(padd(self.numerator, num), den)
        return make_param(
            padd(pmul(self.numerator, den), pmul(num, self.denominator)),
            pmul(self.denominator, den),
        )

    __radd__ = __add__

    def __neg__(self) -> "ParamRational":
        return ParamRational(pneg(self.numerator), self.denominator, _canonical=True)

    def __sub__(self, other: Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return self + make_param(pneg(parts[0]), parts[1])

    def __rsub__(self, other: Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return (-self) + other

    def __mul__(self, other: Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        num, den = parts
        if not num:
            return Fraction(0)
        if den == (Fraction(1),) and len(num) == 1:
            return ParamRational(pscale(self.numerator, num[0]), self.denominator, _canonical=True)
        return make_param(pmul(self.numerator, num), pmul(self.denominator, den))

    __rmul__ = __mul__

    def inverse(self) -> Any:
        return make_param(self.denominator, self.numerator)

    def __truediv__(self, other: Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        num, den = parts
        if not num:
            raise ZeroDivisionError("division by zero")
        return make_param(pmul(self.numerator, den), pmul(self.denominator, num))

    def __rtruediv__(self, other: Any) -> Any:
        parts = self._parts(other)
        if parts is None:
            return NotImplemented
        return make_param(pmul(parts[0], self.denominator), pmul(parts[1], self.numerator))

    def __pow__(self, exponent: int) -> Any:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result: Any = Fraction(1)
        base: Any = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ParamRational):
            return self.numerator == other.numerator and self.denominator == other.denominator
        if _is_plain(other):
            return False
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(("ParamRational", self.numerator, self.denominator))
        return self._hash

    def __bool__(self) -> bool:
        return True

    # -- queries ------------------------------------------------------

    def valuation_at_zero(self) -> int:
        return pvaluation(self.numerator) - pvaluation(self.denominator)

    def leading_coefficient_at_zero(self) -> Any:
        """Coefficient of ``t**v`` in the expansion at 0, ``v`` the valuation."""

        return divide(
            self.numerator[pvaluation(self.numerator)],
            self.denominator[pvaluation(self.denominator)],
        )

    def evaluate(self, value: Any) -> Any:
        den = peval(self.denominator, value)
        if den == 0:
            raise DomainError(f"t = {value} is a pole of {self}")
        return divide(peval(self.numerator, value), den)

    def substitute(self, inner: Any) -> Any:
        """Compose with another value of t (a scalar or a ParamRational)."""

        return divide(_horner(self.numerator, inner), _horner(self.denominator, inner))

    def degree_bound(self) -> int:
        return max(len(self.numerator), len(self.denominator)) - 1

    def to_sympy(self, symbol: sympy.Symbol = T) -> sympy.Expr:
        from .text import scalar_to_sympy

        num = sum(
            (scalar_to_sympy(c) * symbol**i for i, c in enumerate(self.numerator)), sympy.Integer(0)
        )
        den = sum(
            (scalar_to_sympy(c) * symbol**i for i, c in enumerate(self.denominator)), sympy.Integer(0)
        )
        return num / den

    def __repr__(self) -> str:
        from .text import format_scalar

        return format_scalar(self)


def _horner(coeffs: PolyCoeffs, value: Any) -> Any:
    result: Any = Fraction(0)
    for coeff in reversed(coeffs):
        result = result * value + coeff
    return result


def valuation_at_zero(value: Any) -> int | float:
    """Order of vanishing at t = 0 (``math.inf`` for the zero function)."""

    if isinstance(value, ParamRational):
        return value.valuation_at_zero()
    if value == 0:
        return math.inf
    return 0


def limit_at_zero(value: Any) -> Any:
    """Value at t = 0, or ``None`` when ``value`` has a pole there."""

    if not isinstance(value, ParamRational):
        return value
    v = value.valuation_at_zero()
    if v < 0:
        return None
    if v > 0:
        return Fraction(0)
    return value.leading_coefficient_at_zero()


def specialize(value: Any, t_value: Any) -> Any:
    """Evaluate a possibly parametric scalar at ``t = t_value``."""

    if isinstance(value, ParamRational):
        return value.evaluate(t_value)
    return value


__all__ = [
    "ParamRational",
    "T",
    "limit_at_zero",
    "make_param",
    "specialize",
    "valuation_at_zero",
]
