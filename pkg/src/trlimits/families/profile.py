"""Ramification profiles of family members: how the central ramification splits.

The profile lists the local types ``(r, s)`` of the contributing ramification
points of a member, marked ``_0`` when the point lies over ``x = 0`` and put in
brackets when it escapes to the pole of ``x`` as ``t -> 0``. Everything is
computed by factoring polynomials in ``Q[w, t]``, so the generic member is
handled without choosing a value of ``t``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Any

import sympy

from trlimits.algebra import T
from trlimits.curve import admissibility_of_type
from trlimits.errors import FiberInvalidError
from trlimits.runtime.telemetry import span
from trlimits.series import W

from .model import LOGGER_NAME, FamilySpec, _t_sympy

PROFILE_SEPARATOR = " ⊠ "


@dataclass(frozen=True, slots=True, order=True)
class ProfileEntry:
    """``count`` ramification points of type ``(r, s)``; ``s`` is ``None`` when undetermined."""

    over_zero: bool
    escaping: bool
    r: int
    s: int | None
    s_bar: int
    count: int = 1

    def key(self) -> tuple[bool, bool, int, int | None]:
        return (self.over_zero, self.escaping, self.r, self.s)

    def text(self) -> str:
        body = f"({self.r},{'?' if self.s is None else self.s})"
        if self.over_zero:
            body += "_0"
        if self.count > 1:
            body += f"^{self.count}"
        return f"[{body}]" if self.escaping else body


@dataclass(frozen=True)
class SplitProfile:
    """The multiset of local types of one member (``t is None`` for the generic member)."""

    entries: tuple[ProfileEntry, ...]
    t: Any = None
    shared_branch_values: int = 0

    def counts(self) -> dict[tuple[bool, bool, int, int | None], int]:
        return {entry.key(): entry.count for entry in self.entries}

    def total(self) -> int:
        return sum(entry.count for entry in self.entries)

    def text(self) -> str:
        ordered = sorted(self.entries, key=lambda e: (not e.over_zero, e.escaping, e.r, e.s or 0))
        return PROFILE_SEPARATOR.join(entry.text() for entry in ordered) or "∅"

    def locally_admissible(self) -> bool:
        return all(entry.s is not None and admissibility_of_type(entry.r, entry.s) for entry in self.entries)

    def describe(self) -> dict[str, Any]:
        return {
            "t": "generic" if self.t is None else str(self.t),
            "profile": self.text(),
            "entries": [
                {
                    "r": e.r,
                    "s": e.s,
                    "s_bar": e.s_bar,
                    "over_zero": e.over_zero,
                    "escaping": e.escaping,
                    "count": e.count,
                }
                for e in sorted(self.entries)
            ],
            "shared_branch_values": self.shared_branch_values,
        }


# -- factor bookkeeping --------------------------------------------------


def _canonical(factor: sympy.Expr) -> sympy.Expr:
    return sympy.Poly(factor, W, T).monic().as_expr()


def _factor_map(expr: sympy.Expr) -> dict[sympy.Expr, tuple[sympy.Expr, int]]:
    """Irreducible factors of ``expr`` that involve ``w``, keyed canonically."""

    found: dict[sympy.Expr, tuple[sympy.Expr, int]] = {}
    for factor, multiplicity in sympy.factor_list(sympy.expand(expr), W, T)[1]:
        if W not in factor.free_symbols:
            continue
        key = _canonical(factor)
        previous = found.get(key, (factor, 0))[1]
        found[key] = (factor, previous + multiplicity)
    return found


def _mult(table: dict[sympy.Expr, tuple[sympy.Expr, int]], key: sympy.Expr) -> int:
    return table.get(key, (None, 0))[1]


def _degree(expr: sympy.Expr) -> int:
    return 0 if W not in expr.free_symbols else int(sympy.degree(expr, W))


def _low_degree(expr: sympy.Expr) -> int:
    poly = sympy.Poly(sympy.expand(expr), W)
    return min(monomial[0] for monomial in poly.monoms())


def _s_value(r: int, s_bar: int, ord_y: int, dy_mult: int) -> int | None:
    if s_bar % r:
        return s_bar
    if ord_y == 0:
        step = dy_mult + 1
        if step % r:
            return r + step
    return None


def _reduced(expr: sympy.Expr) -> tuple[sympy.Expr, sympy.Expr]:
    return sympy.fraction(sympy.cancel(sympy.together(expr)))


# -- the profile ----------------------------------------------------------


def _central_poles(family: FamilySpec) -> tuple[bool, bool]:
    """Whether ``w = 0`` and ``w = oo`` are poles of the central ``x``."""

    x0 = family.central_expressions()[0][0]
    num, den = _reduced(x0)
    at_zero = _low_degree(den) > _low_degree(num)
    at_infinity = _degree(num) > _degree(den)
    return at_zero, at_infinity


def _escaping_roots(factor: sympy.Expr, at_zero: bool, at_infinity: bool) -> int:
    central = sympy.expand(factor.subs(T, 0))
    if central == 0:
        return 0
    count = 0
    if at_zero:
        count += _low_degree(central) if W in central.free_symbols else 0
    if at_infinity:
        count += _degree(factor) - _degree(central)
    return count


def ramification_profile(family: FamilySpec, t: Any = None) -> SplitProfile:
    """Local types of the contributing ramification points of the member at ``t``.

    ``t = None`` analyses the generic member over ``Q(t)``; escaping points are
    only tracked there. Types with ``s_bar <= -1`` and unramified points are
    omitted.
    """

    generic = t is None
    if generic:
        x, y = family.x, family.y
    else:
        value = _t_sympy(t)
        if family.bad_set.contains(value):
            raise FiberInvalidError(f"t = {value} lies in the bad set of {family.name}", t=t)
        x, y = family.x.subs(T, value), family.y.subs(T, value)

    with span(
        "families::ramification_profile",
        logger_name=LOGGER_NAME,
        metadata={"family": family.name, "t": "generic" if generic else str(t)},
    ):
        xn, xd = _reduced(x)
        yn, yd = _reduced(y)
        dxn, _ = _reduced(sympy.diff(x, W))
        dyn, _ = _reduced(sympy.diff(y, W))
        factors_dx = _factor_map(dxn)
        factors_xn, factors_xd = _factor_map(xn), _factor_map(xd)
        factors_yn, factors_yd = _factor_map(yn), _factor_map(yd)
        factors_dy = _factor_map(dyn)
        at_zero, at_infinity = _central_poles(family) if generic else (False, False)

        tally: Counter[tuple[bool, bool, int, int | None, int]] = Counter()
        regular: list[tuple[sympy.Expr, int]] = []

        def add(factor: sympy.Expr, r: int, s_bar: int, s: int | None, over_zero: bool) -> None:
            if r < 2 or s_bar <= -1:
                return
            size = _degree(factor)
            escaping = _escaping_roots(factor, at_zero, at_infinity) if generic else 0
            escaping = min(escaping, size)
            if size - escaping:
                tally[(over_zero, False, r, s, s_bar)] += size - escaping
            if escaping:
                tally[(over_zero, True, r, s, s_bar)] += escaping

        for key, (factor, multiplicity) in factors_dx.items():
            r = multiplicity + 1
            ord_y = _mult(factors_yn, key) - _mult(factors_yd, key)
            s_bar = r + ord_y
            over_zero = key in factors_xn
            add(factor, r, s_bar, _s_value(r, s_bar, ord_y, _mult(factors_dy, key)), over_zero)
            if not over_zero and r >= 2 and s_bar >= 0:
                regular.append((factor, r))

        for key, (factor, multiplicity) in factors_xd.items():
            if multiplicity >= 2:
                ord_y = _mult(factors_yn, key) - _mult(factors_yd, key)
                s_bar = ord_y - multiplicity
                add(factor, multiplicity, s_bar, s_bar if s_bar % multiplicity else None, False)

        # w = oo through the degrees
        order_x = _degree(xd) - _degree(xn)
        order_y = _degree(yd) - _degree(yn)
        if abs(order_x) >= 2:
            r = abs(order_x)
            s_bar = r + order_y if order_x > 0 else order_y - r
            s = s_bar if s_bar % r else None
            if r >= 2 and s_bar >= 0:
                tally[(order_x > 0, False, r, s, s_bar)] += 1

        shared = _shared_branch_values(regular, xn, xd)

    entries = tuple(
        ProfileEntry(over_zero, escaping, r, s, s_bar, count)
        for (over_zero, escaping, r, s, s_bar), count in sorted(tally.items(), key=lambda item: str(item[0]))
    )
    return SplitProfile(entries, None if generic else t, shared)


def _shared_branch_values(regular: list[tuple[sympy.Expr, int]], xn: sympy.Expr, xd: sympy.Expr) -> int:
    """How many points off ``x = 0`` share their branch value with another one."""

    if not regular:
        return 0
    branch = sympy.Symbol("X")
    image = sympy.Integer(1)
    points = 0
    for factor, _ in regular:
        image *= sympy.resultant(factor, sympy.expand(xn - branch * xd), W)
        points += _degree(factor)
    image = sympy.expand(image)
    if branch not in image.free_symbols:
        return 0
    distinct = sympy.degree(sympy.sqf_part(image, branch, *sorted(image.free_symbols - {branch}, key=str)), branch)
    return max(points - int(distinct), 0)


def expected_profile(r: int, s: int) -> dict[tuple[bool, bool, int, int | None], int] | None:
    """The splitting of the ``(r, s)`` point under a generic admissible deformation.

    Keys are ``(over_zero, escaping, r, s)``; ``None`` when ``(r, s)`` is not
    locally admissible.
    """

    if s in (r - 1, r + 1) or (s == 1 and r >= 2):
        return {(False, False, 2, 3): r - 1, (False, True, 2, 3): r - 1}
    if 2 <= s <= r - 2 and r % s == 1:
        return {
            (True, False, (r - 1) // s, 1): s,
            (False, False, 2, 3): s,
            (False, True, 2, 3): s,
        }
    if 3 <= s <= r - 2 and r % s == s - 1:
        m = (r + 1) // s
        table = {
            (True, False, m, 1): s - 1,
            (False, False, 2, 3): s - 1,
            (False, True, 2, 3): s - 1,
        }
        if m - 1 >= 2:
            table[(True, False, m - 1, 1)] = 1
        return table
    return None


__all__ = [
    "PROFILE_SEPARATOR",
    "ProfileEntry",
    "SplitProfile",
    "expected_profile",
    "ramification_profile",
]
