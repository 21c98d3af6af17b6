"""Monomial symplectic transformations acting on ``(r, s)`` types.

The monomial curve of type ``(r, s)`` is ``x = z^r``, ``y = z^(s - r)``, so
``y dx`` is a multiple of ``z^(s-1) dz``. The maps

    Phi_b(x, y) = (x^(1-b) y^(-b), x^b y^(1+b))

have unit Jacobian in logarithmic coordinates and keep ``y dx`` up to a
constant. On types they act by ``(r, s) -> (r - b s, s)`` and compose as
``Phi_b Phi_c = Phi_(b+c)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from trlimits.errors import DomainError


def _sign(value: int) -> int:
    return 1 if value > 0 else -1


@dataclass(frozen=True, slots=True, order=True)
class MonomialType:
    r: int
    s: int

    def __post_init__(self) -> None:
        if self.r == 0:
            raise DomainError("r must be non-zero")
        if abs(self.r) >= 2 and self.s % self.r == 0:
            raise DomainError(f"s = {self.s} is divisible by r = {self.r}")

    @property
    def exponents(self) -> tuple[int, int]:
        """Exponents of ``z`` in ``x`` and ``y``."""

        return self.r, self.s - self.r

    def local_types(self) -> tuple[tuple[int, int], tuple[int, int]]:
        """Local ``(r, s)`` at ``z = 0`` and at ``z = oo``."""

        r = abs(self.r)
        return (r, _sign(self.r) * self.s), (r, -_sign(self.r) * self.s)

    def geometric(self) -> bool:
        """``dx`` and ``dy`` have no common zero: ``|r| = 1`` or ``|s| <= |r| + 1``."""

        return abs(self.r) == 1 or abs(self.s) <= abs(self.r) + 1

    def well_defined(self) -> bool:
        if abs(self.r) == 1:
            return True
        m = abs(self.s)
        return 1 <= m <= abs(self.r) + 1 and self.r % m in (1 % m, (m - 1) % m)

    def transform(self, b: int) -> "MonomialType":
        return MonomialType(self.r - b * self.s, self.s)


def phi_b_on_type(r: int, s: int, b: int) -> tuple[int, int]:
    """Image of the type ``(r, s)`` under ``Phi_b``."""

    image = MonomialType(r, s).transform(b)
    return image.r, image.s


def type_local_data(r: int, s: int) -> tuple[int, int]:
    return MonomialType(r, s).local_types()[0]


def geometric_condition(r: int, s: int) -> bool:
    return MonomialType(r, s).geometric()


def well_defined_type(r: int, s: int) -> bool:
    return MonomialType(r, s).well_defined()


def reduce_type(r: int, s: int) -> tuple[int, int, int]:
    """``(k, s, beta)`` with ``r = k + beta |s|`` and ``0 <= k < |s|``; ``Phi`` takes ``(r, s)`` to ``(k, s)``."""

    if s == 0:
        raise DomainError("cannot reduce modulo s = 0")
    m = abs(s)
    beta, k = divmod(r, m)
    return k, s, beta


def phi_orbit(r: int, s: int, bound: int) -> list[tuple[int, int]]:
    """Types ``Phi_b(r, s)`` for ``|b| <= bound``, skipping the degenerate ``r = 0``."""

    start = MonomialType(r, s)
    found: list[tuple[int, int]] = []
    for b in range(-bound, bound + 1):
        if r - b * s == 0:
            continue
        image = start.transform(b)
        found.append((image.r, image.s))
    return sorted(set(found))


def congruence_generated(r: int, s: int, bound: int | None = None) -> bool:
    """Whether the orbit of ``(r, s)`` stays inside the geometric types.

    The default window reaches the reduced representative and its negative
    partner, which is enough to decide.
    """

    if s == 0 or math.gcd(r, s) != 1:
        raise DomainError(f"need coprime r and non-zero s, got ({r}, {s})")
    window = bound if bound is not None else abs(r) // abs(s) + 2
    return all(MonomialType(a, b).geometric() for a, b in phi_orbit(r, s, window))


__all__ = [
    "MonomialType",
    "congruence_generated",
    "geometric_condition",
    "phi_b_on_type",
    "phi_orbit",
    "reduce_type",
    "type_local_data",
    "well_defined_type",
]
