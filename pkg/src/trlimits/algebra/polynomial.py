"""Dense univariate polynomials over any exact scalar type.

Coefficients are stored low degree first, trailing zeros stripped. The tuple
helpers are shared with :mod:`trlimits.algebra.paramrational`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .rational import as_scalar, divide

PolyCoeffs = tuple[Any, ...]


def strip(coeffs: Iterable[Any]) -> PolyCoeffs:
    values = [as_scalar(c) for c in coeffs]
    while values and values[-1] == 0:
        values.pop()
    return tuple(values)


def padd(a: PolyCoeffs, b: PolyCoeffs) -> PolyCoeffs:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = out[i] + c
    return strip(out)


def pneg(a: PolyCoeffs) -> PolyCoeffs:
    return tuple(-c for c in a)


def psub(a: PolyCoeffs, b: PolyCoeffs) -> PolyCoeffs:
    return padd(a, pneg(b))


def pmul(a: PolyCoeffs, b: PolyCoeffs) -> PolyCoeffs:
    if not a or not b:
        return ()
    out: list[Any] = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y == 0:
                continue
            out[i + j] = out[i + j] + x * y
    return strip(out)


def pscale(a: PolyCoeffs, c: Any) -> PolyCoeffs:
    if c == 0:
        return ()
    return strip(x * c for x in a)


def pdivmod(a: PolyCoeffs, b: PolyCoeffs) -> tuple[PolyCoeffs, PolyCoeffs]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quotient: list[Any] = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        factor = divide(rem[-1], lead)
        quotient[shift] = factor
        for i, coeff in enumerate(b):
            rem[shift + i] = rem[shift + i] - factor * coeff
        rem.pop()
        while rem and rem[-1] == 0:
            rem.pop()
    return strip(quotient), strip(rem)


def pmonic(a: PolyCoeffs) -> PolyCoeffs:
    if not a:
        return a
    lead = a[-1]
    if lead == 1:
        return a
    inv = divide(1, lead)
    return strip(c * inv for c in a)


def pgcd(a: PolyCoeffs, b: PolyCoeffs) -> PolyCoeffs:
    """Monic greatest common divisor (the empty tuple for gcd(0, 0))."""

    while b:
        _, r = pdivmod(a, b)
        a, b = b, pmonic(r)
    return pmonic(a)


def pexact_div(a: PolyCoeffs, b: PolyCoeffs) -> PolyCoeffs:
    q, r = pdivmod(a, b)
    if r:
        raise ArithmeticError("polynomial division is not exact")
    return q


def pderivative(a: PolyCoeffs) -> PolyCoeffs:
    return strip(i * a[i] for i in range(1, len(a)))


def peval(a: PolyCoeffs, value: Any) -> Any:
    result: Any = Fraction(0)
    for coeff in reversed(a):
        result = result * value + coeff
    return result


def pvaluation(a: PolyCoeffs) -> int:
    for i, c in enumerate(a):
        if c != 0:
            return i
    raise ValueError("valuation of the zero polynomial")


@dataclass(frozen=True, slots=True)
class Polynomial:
    """Univariate polynomial with exact coefficients, low degree first."""

    coeffs: PolyCoeffs = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", strip(self.coeffs))

    @classmethod
    def constant(cls, value: Any) -> "Polynomial":
        return cls((value,))

    @classmethod
    def monomial(cls, degree: int, coeff: Any = 1) -> "Polynomial":
        if degree < 0:
            raise ValueError("monomial degree must be non-negative")
        return cls((0,) * degree + (coeff,))

    @classmethod
    def from_roots(cls, roots: Sequence[Any]) -> "Polynomial":
        result: PolyCoeffs = (Fraction(1),)
        for root in roots:
            result = pmul(result, (-as_scalar(root), Fraction(1)))
        return cls(result)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def leading(self) -> Any:
        if not self.coeffs:
            return Fraction(0)
        return self.coeffs[-1]

    def coefficient(self, k: int) -> Any:
        if 0 <= k < len(self.coeffs):
            return self.coeffs[k]
        return Fraction(0)

    def valuation(self) -> int:
        return pvaluation(self.coeffs)

    def __add__(self, other: Any) -> "Polynomial":
        other = _as_poly(other)
        return Polynomial(padd(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial(pneg(self.coeffs))

    def __sub__(self, other: Any) -> "Polynomial":
        return Polynomial(psub(self.coeffs, _as_poly(other).coeffs))

    def __rsub__(self, other: Any) -> "Polynomial":
        return Polynomial(psub(_as_poly(other).coeffs, self.coeffs))

    def __mul__(self, other: Any) -> "Polynomial":
        if isinstance(other, Polynomial):
            return Polynomial(pmul(self.coeffs, other.coeffs))
        return Polynomial(pscale(self.coeffs, as_scalar(other)))

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if exponent < 0:
            raise ValueError("negative polynomial power")
        result = Polynomial((Fraction(1),))
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __divmod__(self, other: "Polynomial") -> tuple["Polynomial", "Polynomial"]:
        q, r = pdivmod(self.coeffs, other.coeffs)
        return Polynomial(q), Polynomial(r)

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(pexact_div(self.coeffs, other.coeffs))

    def gcd(self, other: "Polynomial") -> "Polynomial":
        return Polynomial(pgcd(self.coeffs, other.coeffs))

    def monic(self) -> "Polynomial":
        return Polynomial(pmonic(self.coeffs))

    def derivative(self) -> "Polynomial":
        return Polynomial(pderivative(self.coeffs))

    def __call__(self, value: Any) -> Any:
        return peval(self.coeffs, value)

    def reversed(self, degree: int | None = None) -> "Polynomial":
        """``w**degree * P(1/w)``, the reciprocal polynomial."""

        n = self.degree if degree is None else degree
        if n < self.degree:
            raise ValueError("reciprocal degree below the polynomial degree")
        padded = list(self.coeffs) + [Fraction(0)] * (n + 1 - len(self.coeffs))
        return Polynomial(tuple(reversed(padded)))

    def map_coefficients(self, func: Any) -> "Polynomial":
        return Polynomial(tuple(func(c) for c in self.coeffs))

    def __repr__(self) -> str:
        return f"Polynomial({list(self.coeffs)!r})"


def _as_poly(value: Any) -> Polynomial:
    if isinstance(value, Polynomial):
        return value
    return Polynomial((as_scalar(value),))


__all__ = [
    "PolyCoeffs",
    "Polynomial",
    "padd",
    "pderivative",
    "pdivmod",
    "peval",
    "pexact_div",
    "pgcd",
    "pmonic",
    "pmul",
    "pneg",
    "pscale",
    "psub",
    "pvaluation",
    "strip",
]
