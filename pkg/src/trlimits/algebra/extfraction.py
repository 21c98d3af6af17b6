"""Reduced non-negative-or-signed fractions with a point at infinity, and Farey sequences."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Any

from trlimits.errors import DomainError, ParseError


@total_ordering
@dataclass(frozen=True, slots=True)
class ExtFraction:
    """``num/den`` in lowest terms with ``den >= 0``; ``1/0`` is infinity.

    Infinity compares above every finite value.
    """

    num: int
    den: int = 1

    def __post_init__(self) -> None:
        num, den = self.num, self.den
        if den < 0:
            num, den = -num, -den
        if den == 0:
            if num == 0:
                raise ValueError("0/0 is not an extended fraction")
            num = 1
        else:
            g = math.gcd(num, den)
            num, den = num // g, den // g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def infinity(cls) -> "ExtFraction":
        return cls(1, 0)

    @classmethod
    def of(cls, value: Any) -> "ExtFraction":
        if isinstance(value, ExtFraction):
            return value
        if isinstance(value, bool):
            raise TypeError("booleans are not fractions")
        if isinstance(value, int):
            return cls(value, 1)
        if isinstance(value, Fraction):
            return cls(value.numerator, value.denominator)
        if isinstance(value, str):
            return parse_ext_fraction(value)
        raise TypeError(f"cannot convert {value!r} to an extended fraction")

    @property
    def is_infinite(self) -> bool:
        return self.den == 0

    def as_fraction(self) -> Fraction:
        if self.is_infinite:
            raise DomainError("infinity has no rational value")
        return Fraction(self.num, self.den)

    def reciprocal(self) -> "ExtFraction":
        if self.num == 0:
            return ExtFraction.infinity()
        if self.is_infinite:
            return ExtFraction(0)
        return ExtFraction(self.den, self.num)

    def __lt__(self, other: object) -> bool:
        if not isinstance(other, ExtFraction):
            try:
                other = ExtFraction.of(other)
            except TypeError:
                return NotImplemented
        if self.is_infinite:
            return False
        if other.is_infinite:
            return True
        return self.num * other.den < other.num * self.den

    def __str__(self) -> str:
        if self.is_infinite:
            return "oo"
        if self.den == 1:
            return str(self.num)
        return f"{self.num}/{self.den}"


def parse_ext_fraction(text: str) -> ExtFraction:
    raw = text.strip()
    if raw in {"oo", "inf", "infinity", "∞"}:
        return ExtFraction.infinity()
    try:
        value = Fraction(raw)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"not a fraction: {text!r}", source=text) from exc
    if value.denominator != 1 and "." in raw:
        raise ParseError(f"decimal input is not exact: {text!r}", source=text)
    return ExtFraction(value.numerator, value.denominator)


def farey_sequence(r: int, bound: ExtFraction | Fraction | int = 1) -> list[ExtFraction]:
    """All reduced ``p/q >= 0`` with ``q <= r``, ascending, up to ``bound`` inclusive.

    For ``r = 1`` this is 0, 1, 2, ...; the sequence is infinite, so an infinite
    bound is rejected.
    """

    if r < 1:
        raise DomainError("Farey order must be positive")
    limit = ExtFraction.of(bound)
    if limit.is_infinite:
        raise DomainError("the Farey sequence is infinite; give a finite bound")
    out: list[ExtFraction] = []
    a, b, c, d = 0, 1, 1, r
    if ExtFraction(0) > limit:
        return out
    out.append(ExtFraction(a, b))
    while ExtFraction(c, d) <= limit:
        out.append(ExtFraction(c, d))
        k = (r + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
    return out


def in_farey(f: ExtFraction, r: int) -> bool:
    return f.is_infinite or (f.num >= 0 and f.den <= r)


def farey_neighbours(f: ExtFraction | Fraction | int, r: int) -> tuple[ExtFraction, ExtFraction]:
    """Left and right neighbours of ``f`` in the Farey sequence of order ``r``.

    In order 1 the neighbours of an integer ``p`` are ``p - 1`` and infinity.
    """

    f = ExtFraction.of(f)
    if r < 1:
        raise DomainError("Farey order must be positive")
    if f.is_infinite or f.num <= 0:
        raise DomainError(f"{f} has no two Farey neighbours")
    if not in_farey(f, r):
        raise DomainError(f"{f} is not in the Farey sequence of order {r}")
    p, q = f.num, f.den
    if r == 1:
        return ExtFraction(p - 1), ExtFraction.infinity()
    b = next(b for b in range(r, 0, -1) if (p * b - 1) % q == 0)
    d = next(d for d in range(r, 0, -1) if (p * d + 1) % q == 0)
    return ExtFraction((p * b - 1) // q, b), ExtFraction((p * d + 1) // q, d)


def are_farey_neighbours(left: ExtFraction, right: ExtFraction) -> bool:
    """Adjacency in the Farey sequence of order ``max(den)`` via the Bezout identity."""

    if left.is_infinite:
        return False
    if right.is_infinite:
        return left.den == 1 and right.num == 1
    return right.num * left.den - left.num * right.den == 1


__all__ = [
    "ExtFraction",
    "are_farey_neighbours",
    "farey_neighbours",
    "farey_sequence",
    "in_farey",
    "parse_ext_fraction",
]
