"""Sufficient conditions for vertical globalisation of topological recursion.

Every predicate works on :class:`LocalData` alone. The criteria are sufficient
only, so a fibre is reported as globalisable ``"yes"`` or ``"unknown"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable, Sequence

from trlimits.algebra import divide
from trlimits.curve.admissibility import admissibility_of_type
from trlimits.errors import DomainError
from trlimits.runtime.telemetry import span

from .local_data import INFINITE_S, FiberData, LocalData

LOGGER_NAME = "trlimits.globalization"


def _ordered(a: LocalData, b: LocalData) -> tuple[LocalData, LocalData]:
    return (a, b) if a.nu <= b.nu else (b, a)


def _congruent_pm_one(r: int, s: int) -> bool:
    m = abs(s)
    return m != 0 and r % m in (1 % m, (m - 1) % m)


def is_non_resonant(a: LocalData, b: LocalData) -> bool:
    """Distinct aspect ratios, or equal ones with ``((tau_a/r_a) / (tau_b/r_b))^r' != 1``.

    Without leading coefficients resonance cannot be excluded and the pair is
    reported resonant.
    """

    if a.nu != b.nu:
        return True
    pa, pb = a.normalised_tau_power(), b.normalised_tau_power()
    if pa is None or pb is None:
        return False
    return divide(pa, pb) != 1


def _floor_term(s: int | float, i: int, r: int) -> int:
    if i == 1:
        return 0
    return math.floor(Fraction(int(s) * (i - 1), r))


def pair_satisfies_C1C2(a: LocalData, b: LocalData) -> bool:
    """The two families of floor inequalities, evaluated as stated."""

    r1, sb1, s1 = a.r, a.s_bar, a.floor_s
    r2, sb2, s2 = b.r, b.s_bar, b.floor_s
    low = min(r1 * sb2, r2 * sb1)
    first = all(
        sb1 * r2 - sb1 * i + r1 + r1 * _floor_term(s2, i, r2) - low >= 0 for i in range(1, r2 + 1)
    )
    second = all(
        sb2 * r1 - sb2 * i + r2 + r2 * _floor_term(s1, i, r1) - low >= 0 for i in range(1, r1 + 1)
    )
    return first and second


def globalisation_rule(a: LocalData, b: LocalData) -> str | None:
    """``"C-i (m=...)"`` or ``"C-ii"`` when one of the two conditions holds, else ``None``."""

    lo, hi = _ordered(a, b)
    nu1, nu2 = lo.nu.as_fraction(), hi.nu.as_fraction()
    r12 = max(a.r, b.r)
    for m in range(1, r12):
        if nu1 <= Fraction(1, m) <= nu2:
            return f"C-i (m={m})"
    if nu1 <= Fraction(1, r12):
        return "C-ii"
    return None


def pair_satisfies_Ci_Cii(a: LocalData, b: LocalData) -> bool:
    return globalisation_rule(a, b) is not None


def separates_fibres(fiber: FiberData) -> bool:
    """At most one point with ``s_bar >= 2``; equal ``s_bar`` means distinct ``tau``."""

    if not fiber.unramified:
        raise DomainError("separates_fibres applies to unramified fibres; use fiber_globalisable")
    if sum(1 for p in fiber if p.s_bar >= 2) > 1:
        return False
    for a, b in combinations(fiber.points, 2):
        if a.s_bar == b.s_bar and not is_non_resonant(a, b):
            return False
    return True


@dataclass(frozen=True, slots=True)
class PairVerdict:
    first: int
    second: int
    non_resonant: bool
    rule: str | None

    @property
    def globalisable(self) -> bool:
        return self.non_resonant and self.rule is not None

    def reason(self, fiber: FiberData) -> str:
        a, b = fiber.points[self.first], fiber.points[self.second]
        names = f"points {self.first} (nu={a.nu}) and {self.second} (nu={b.nu})"
        if not self.non_resonant:
            return f"{names} are resonant"
        if self.rule is None:
            return f"{names} satisfy neither C-i nor C-ii"
        return f"{names} satisfy {self.rule}"

    def describe(self) -> dict[str, Any]:
        return {
            "pair": [self.first, self.second],
            "non_resonant": self.non_resonant,
            "rule": self.rule,
            "globalisable": self.globalisable,
        }


@dataclass(frozen=True, slots=True)
class FiberVerdict:
    fiber: FiberData
    pairs: tuple[PairVerdict, ...]
    criterion: str

    @property
    def globalisable(self) -> bool:
        return all(p.globalisable for p in self.pairs)

    @property
    def verdict(self) -> str:
        return "yes" if self.globalisable else "unknown"

    def reasons(self) -> list[str]:
        return [p.reason(self.fiber) for p in self.pairs]

    def describe(self) -> dict[str, Any]:
        return {
            "base": self.fiber.base,
            "globalisable": self.verdict,
            "criterion": self.criterion,
            "points": [p.describe() for p in self.fiber],
            "pairs": [p.describe() for p in self.pairs],
            "reasons": self.reasons(),
        }


def fiber_globalisable(fiber: FiberData) -> FiberVerdict:
    """Every pair non-resonant and satisfying C-i or C-ii."""

    pairs = tuple(
        PairVerdict(i, j, is_non_resonant(a, b), globalisation_rule(a, b))
        for (i, a), (j, b) in combinations(enumerate(fiber.points), 2)
    )
    criterion = "separation of an unramified fibre" if fiber.unramified else "pairwise C-i/C-ii"
    return FiberVerdict(fiber, pairs, criterion)


@dataclass(frozen=True, slots=True)
class BksReport:
    """Conditions for well-defined global recursion on fibres with ``s = s_bar > 0``.

    When ``applicable`` is false the other fields are ``None``.
    """

    applicable: bool
    reason: str
    c_a: bool | None = None
    c_b: bool | None = None
    c_c: bool | None = None
    sufficient_chain: bool | None = None
    failures: tuple[str, ...] = field(default=())

    @property
    def necessary_Cabc(self) -> bool | None:
        if not self.applicable:
            return None
        return bool(self.c_a and self.c_b and self.c_c)

    def describe(self) -> dict[str, Any]:
        return {
            "applicable": self.applicable,
            "reason": self.reason,
            "necessary_Cabc": self.necessary_Cabc,
            "C-a": self.c_a,
            "C-b": self.c_b,
            "C-c": self.c_c,
            "sufficient_chain": self.sufficient_chain,
            "failures": list(self.failures),
        }


def _bks_s(p: LocalData) -> int | None:
    s = p.s_bar if p.r == 1 else p.s
    if s == INFINITE_S or s != p.s_bar or p.s_bar <= 0:
        return None
    return int(s)


def _inverse_floor(p: LocalData) -> int:
    return math.floor(Fraction(p.r, p.s_bar))


def bks_predicates(fiber: FiberData) -> BksReport:
    """Necessary conditions C-a, C-b, C-c and the ordered sufficient chain."""

    types = [_bks_s(p) for p in fiber]
    if any(s is None for s in types):
        return BksReport(False, "needs s = s_bar > 0 at every point of the fibre")
    pts = sorted(fiber.points, key=lambda p: p.nu)
    s_of = {id(p): _bks_s(p) for p in pts}
    failures: list[str] = []

    c_a = all(_congruent_pm_one(p.r, s_of[id(p)]) for p in pts)
    if not c_a:
        failures.append("C-a: some r is not +-1 modulo s")

    c_b = True
    for a, b in combinations(pts, 2):
        sa, sb = s_of[id(a)], s_of[id(b)]
        if min(sa, sb) < 3:
            continue
        same_sign = any(a.r % sa == e % sa and b.r % sb == e % sb for e in (1, -1))
        if same_sign and _inverse_floor(a) == _inverse_floor(b):
            c_b = False
            failures.append(f"C-b: floors of 1/nu agree for nu = {a.nu} and {b.nu}")

    c_c = True
    for triple in combinations(pts, 3):
        if len({_inverse_floor(p) for p in triple}) == 1 and all(s_of[id(p)] != 1 for p in triple):
            c_c = False
            failures.append(f"C-c: three points share floor(1/nu) = {_inverse_floor(triple[0])}")

    first, last = pts[0], pts[-1]
    if len(pts) == 1:
        chain = _congruent_pm_one(first.r, s_of[id(first)])
    else:
        chain = (
            first.r % s_of[id(first)] == (-1) % s_of[id(first)]
            and all(s_of[id(p)] == 1 for p in pts[1:-1])
            and last.r % s_of[id(last)] == 1 % s_of[id(last)]
        )
    return BksReport(True, "s = s_bar > 0 at every point", c_a, c_b, c_c, chain, tuple(failures))


@dataclass(frozen=True, slots=True)
class FamilySample:
    """Local data of one member of a family: fibres over branch values and a few others."""

    t: Any
    branch_fibers: tuple[FiberData, ...]
    regular_fibers: tuple[FiberData, ...] = ()
    label: str | None = None


@dataclass(frozen=True, slots=True)
class SampleVerdict:
    sample: FamilySample
    locally_admissible: bool
    separates: bool
    globalisable: bool
    reasons: tuple[str, ...]

    @property
    def admissible(self) -> bool:
        return self.locally_admissible and self.separates and self.globalisable

    def describe(self) -> dict[str, Any]:
        from trlimits.algebra import format_scalar

        return {
            "t": None if self.sample.t is None else format_scalar(self.sample.t),
            "label": self.sample.label,
            "locally_admissible": self.locally_admissible,
            "separates_fibres": self.separates,
            "globalisable": "yes" if self.globalisable else "unknown",
            "admissible": self.admissible,
            "reasons": list(self.reasons),
        }


@dataclass(frozen=True, slots=True)
class FamilyReport:
    samples: tuple[SampleVerdict, ...]

    @property
    def admissible(self) -> bool:
        return all(s.admissible for s in self.samples)

    def describe(self) -> dict[str, Any]:
        return {
            "admissible": "yes" if self.admissible else "unknown",
            "samples": [s.describe() for s in self.samples],
        }


def _sample_verdict(sample: FamilySample) -> SampleVerdict:
    reasons: list[str] = []
    local_ok = True
    for fiber in (*sample.branch_fibers, *sample.regular_fibers):
        for point in fiber:
            verdict = admissibility_of_type(point.r, point.s, point.s_bar)
            if not verdict:
                local_ok = False
                reasons.append(f"fibre over {fiber.base}: {verdict.reason} ({verdict.clause})")
    separated = True
    for fiber in sample.regular_fibers:
        if not fiber.unramified:
            reasons.append(f"fibre over {fiber.base} was given as regular but is ramified")
            separated = False
        elif not separates_fibres(fiber):
            separated = False
            reasons.append(f"omega_0,1 does not separate the fibre over {fiber.base}")
    global_ok = True
    for fiber in sample.branch_fibers:
        verdict = fiber_globalisable(fiber)
        if not verdict.globalisable:
            global_ok = False
            reasons.extend(
                f"fibre over {fiber.base}: {p.reason(fiber)}" for p in verdict.pairs if not p.globalisable
            )
    return SampleVerdict(sample, local_ok, separated, global_ok, tuple(reasons))


def family_admissibility_report(samples: Iterable[FamilySample] | Sequence[FamilySample]) -> FamilyReport:
    """Admissibility in a family, from local data at sampled parameter values.

    The image of ``x`` is assumed constant across the family.
    """

    with span("globalization::family_admissibility", logger_name=LOGGER_NAME):
        return FamilyReport(tuple(_sample_verdict(s) for s in samples))


__all__ = [
    "BksReport",
    "FamilyReport",
    "FamilySample",
    "FiberVerdict",
    "PairVerdict",
    "SampleVerdict",
    "bks_predicates",
    "family_admissibility_report",
    "fiber_globalisable",
    "globalisation_rule",
    "is_non_resonant",
    "pair_satisfies_C1C2",
    "pair_satisfies_Ci_Cii",
    "separates_fibres",
]
