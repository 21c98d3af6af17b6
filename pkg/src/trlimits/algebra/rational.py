"""Helpers around ``fractions.Fraction``, the ground field of every computation."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

from trlimits.errors import DomainError


class _Infinity:
    """The point at infinity of the w-line (and of the x-line)."""

    __slots__ = ()
    _instance: "_Infinity | None" = None

    def __new__(cls) -> "_Infinity":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "oo"

    def __reduce__(self) -> str:
        return "INFINITY"


INFINITY = _Infinity()


def is_infinity(value: Any) -> bool:
    return value is INFINITY


def as_scalar(value: Any) -> Any:
    """Promote Python integers to ``Fraction`` so that ``/`` never yields a float."""

    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError("floats are not exact scalars")
    return value


def is_zero(value: Any) -> bool:
    return value == 0


def divide(a: Any, b: Any) -> Any:
    """Exact quotient of two scalars of any supported kind."""

    if isinstance(b, int):
        b = Fraction(b)
    if isinstance(a, int):
        a = Fraction(a)
    if b == 0:
        raise ZeroDivisionError("division by an exact zero scalar")
    return a / b


def integer_root(n: int, r: int) -> int | None:
    """Exact non-negative r-th root of ``n >= 0`` or ``None``."""

    if n < 0:
        raise DomainError("integer_root expects a non-negative integer")
    if n in (0, 1):
        return n
    guess = round(n ** (1.0 / r)) if n < 2**900 else math.isqrt(n) if r == 2 else None
    if guess is not None:
        for candidate in (guess - 1, guess, guess + 1):
            if candidate >= 0 and candidate**r == n:
                return candidate
    lo, hi = 0, 1 << (n.bit_length() // r + 1)
    while lo <= hi:
        mid = (lo + hi) // 2
        power = mid**r
        if power == n:
            return mid
        if power < n:
            lo = mid + 1
        else:
            hi = mid - 1
    return None


def rational_root(q: Fraction | int, r: int) -> Fraction | None:
    """Principal exact r-th root of a rational, or ``None`` when irrational.

    Positive inputs get the positive root; negative inputs have a real root only
    for odd ``r``.
    """

    q = Fraction(q)
    if r < 1:
        raise DomainError("root order must be positive")
    if q == 0:
        return Fraction(0)
    sign = 1
    if q < 0:
        if r % 2 == 0:
            return None
        sign = -1
        q = -q
    num = integer_root(q.numerator, r)
    den = integer_root(q.denominator, r)
    if num is None or den is None:
        return None
    return sign * Fraction(num, den)


def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Write ``n = f**2 * d`` with ``d`` squarefree (sign kept on ``d``)."""

    if n == 0:
        raise DomainError("zero has no squarefree part")
    sign = -1 if n < 0 else 1
    n = abs(n)
    f = 1
    d = 1
    p = 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            f *= p
        if n % p == 0:
            n //= p
            d *= p
        p += 1
    d *= n
    return f, sign * d


def format_fraction(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


__all__ = [
    "INFINITY",
    "is_infinity",
    "as_scalar",
    "divide",
    "format_fraction",
    "integer_root",
    "is_zero",
    "rational_root",
    "squarefree_decomposition",
]
