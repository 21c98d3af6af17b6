"""Global admissibility read off the Newton polygon of a nondegenerate curve.

Only the corners ``0oo`` (top left) and ``oo0`` (bottom right) carry
conditions; the origin must be a smooth point and the corner ``oooo`` is free.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Sequence

import sympy

from trlimits.errors import DomainError
from trlimits.runtime.telemetry import span

from .corners import EdgeLocal, corner_counts, corner_edges
from .lattice import LatticePolygon, polynomial_support

LOGGER_NAME = "trlimits.polygon"

CONDITIONED_CORNERS = ("0oo", "oo0")


def _congruent_pm_one(r: int, s: int) -> bool:
    if s == 0:
        return False
    a = abs(s)
    return r % a in (1 % a, (a - 1) % a)


def edge_locally_admissible(edge: EdgeLocal) -> bool:
    """``mu <= 1`` (resp. ``mu >= 1`` in ``oo0``) or ``r = +-1 mod s``."""

    mu = edge.slope.as_fraction()
    if edge.corner == "0oo":
        return mu <= 1 or _congruent_pm_one(edge.r, edge.s_bar)
    if edge.corner == "oo0":
        return mu >= 1 or _congruent_pm_one(edge.r, edge.s_bar)
    raise DomainError(f"no edge admissibility rule in corner {edge.corner!r}")


def pair_globalisable(first: EdgeLocal, second: EdgeLocal) -> tuple[bool, str | None]:
    """Whether two edges of the same corner are globalisable, with the rule that holds.

    Rules ``G1``-``G3`` apply in ``0oo`` and ``G1'``-``G3'`` in ``oo0``.
    """

    if first.corner != second.corner:
        raise DomainError("edges must lie in the same corner")
    lo, hi = sorted((first, second), key=lambda e: e.slope)
    mu_i, mu_j = lo.slope.as_fraction(), hi.slope.as_fraction()
    r_ij = max(lo.r, hi.r)
    if lo.corner == "0oo":
        if mu_i <= 1:
            return True, "G3"
        if any(1 / mu_j <= Fraction(m - 1, m) <= 1 / mu_i for m in range(2, r_ij)):
            return True, "G1"
        if 1 / mu_i >= Fraction(r_ij - 1, r_ij):
            return True, "G2"
        return False, None
    if lo.corner == "oo0":
        if mu_j >= 1:
            return True, "G3'"
        if any(1 / mu_j <= Fraction(m + 1, m) <= 1 / mu_i for m in range(1, r_ij)):
            return True, "G1'"
        # aspect ratio -1 + 1/mu_j at most 1/r_ij
        if 1 / mu_j <= Fraction(r_ij + 1, r_ij):
            return True, "G2'"
        return False, None
    raise DomainError(f"no globalisation rule in corner {lo.corner!r}")


@dataclass(frozen=True, slots=True)
class EdgeSequenceReport:
    corner: str
    edges: tuple[EdgeLocal, ...]
    local: tuple[bool, ...]
    pairs: tuple[tuple[int, int, bool, str | None], ...]

    @property
    def admissible(self) -> bool:
        return all(self.local) and all(ok for _, _, ok, _ in self.pairs)

    def failures(self) -> list[str]:
        out = [
            f"edge of slope {self.edges[k].slope} is not locally admissible"
            for k, ok in enumerate(self.local)
            if not ok
        ]
        out.extend(
            f"edges of slopes {self.edges[a].slope} and {self.edges[b].slope} are not globalisable"
            for a, b, ok, _ in self.pairs
            if not ok
        )
        return out

    def describe(self) -> dict[str, Any]:
        return {
            "corner": self.corner,
            "edges": [e.describe() | {"locally_admissible": ok} for e, ok in zip(self.edges, self.local)],
            "pairs": [
                {"edges": [a, b], "globalisable": ok, "rule": rule} for a, b, ok, rule in self.pairs
            ],
            "admissible": self.admissible,
        }


def edge_admissibility(corner: str, edges: Sequence[EdgeLocal]) -> EdgeSequenceReport:
    if corner not in CONDITIONED_CORNERS:
        raise DomainError(f"corner must be one of {CONDITIONED_CORNERS}, got {corner!r}")
    for edge in edges:
        if edge.corner != corner:
            raise DomainError(f"edge in corner {edge.corner!r} passed for corner {corner!r}")
    local = tuple(edge_locally_admissible(e) for e in edges)
    pairs = tuple(
        (a, b, *pair_globalisable(edges[a], edges[b])) for a, b in combinations(range(len(edges)), 2)
    )
    return EdgeSequenceReport(corner, tuple(edges), local, pairs)


@dataclass(frozen=True, slots=True)
class GammaVerdict:
    """``smooth_origin`` and both corner reports; ``admissible`` is their conjunction."""

    smooth_origin: bool
    top_left: EdgeSequenceReport
    bottom_right: EdgeSequenceReport
    reasons: tuple[str, ...] = field(default=())

    @property
    def admissible(self) -> bool:
        return self.smooth_origin and self.top_left.admissible and self.bottom_right.admissible

    def failed_conditions(self) -> list[str]:
        failed = []
        if not self.smooth_origin:
            failed.append("GA1")
        if not self.top_left.admissible:
            failed.append("GA2")
        if not self.bottom_right.admissible:
            failed.append("GA3")
        return failed

    def describe(self) -> dict[str, Any]:
        return {
            "admissible": self.admissible,
            "failed": self.failed_conditions(),
            "smooth_origin": self.smooth_origin,
            "top_left": self.top_left.describe(),
            "bottom_right": self.bottom_right.describe(),
            "reasons": list(self.reasons),
        }


def gamma_admissibility(polygon: LatticePolygon, *, nondegenerate: bool = True) -> GammaVerdict:
    """Global admissibility of the compact curve of a nondegenerate ``P`` with this polygon.

    Nondegeneracy is an assertion of the caller; see ``check_nondegenerate``.
    """

    if not nondegenerate:
        raise DomainError("the polygon criterion only applies to nondegenerate curves")
    with span("polygon::gamma_admissibility", logger_name=LOGGER_NAME, metadata={"polygon": repr(polygon)}):
        diagram = corner_counts(polygon)
        top = edge_admissibility("0oo", corner_edges(polygon, "0oo"))
        bottom = edge_admissibility("oo0", corner_edges(polygon, "oo0"))
        reasons: list[str] = []
        if diagram.counts["00"]:
            reasons.append(f"origin is singular: {diagram.counts['00']} lattice points in its corner")
        reasons.extend(top.failures())
        reasons.extend(bottom.failures())
        return GammaVerdict(diagram.counts["00"] == 0, top, bottom, tuple(reasons))


def _edge_polynomial(poly: sympy.Poly, edge_points: Sequence[tuple[int, int]], u: sympy.Symbol) -> sympy.Expr:
    coeffs = poly.as_dict()
    return sympy.Add(*(coeffs.get(tuple(p), 0) * u**k for k, p in enumerate(edge_points)))


def check_nondegenerate(expr: Any, *, substitutions: dict[Any, Any] | None = None) -> bool:
    """Exact nondegeneracy test at given parameter values.

    Every slope polynomial must be squarefree and ``P = P_x = P_y = 0`` must have
    no solution with ``x y != 0``. Parameters other than ``x, y`` must be
    substituted away (a random rational ``t`` gives the generic answer with
    high probability).
    """

    x, y, u, z = sympy.symbols("x y u z")
    value = sympy.sympify(expr)
    if substitutions:
        value = value.subs(substitutions)
    if value.free_symbols - {x, y}:
        raise DomainError(f"substitute every parameter first: {sorted(map(str, value.free_symbols - {x, y}))}")
    poly = sympy.Poly(sympy.expand(value), x, y)
    polygon = LatticePolygon.from_points(polynomial_support(value, x, y))
    for edge in polygon.maximal_edges:
        if edge.length < 2:
            continue
        q = sympy.Poly(_edge_polynomial(poly, edge.points(), u), u)
        q = sympy.Poly(sympy.cancel(q.as_expr() / u ** min(m[0] for m in q.monoms())), u)
        if q.degree() > 0 and sympy.gcd(q, q.diff(u)).degree() > 0:
            return False
    system = [value, sympy.diff(value, x), sympy.diff(value, y), x * y * z - 1]
    basis = sympy.groebner(system, x, y, z, order="lex")
    return list(basis.exprs) == [1]


__all__ = [
    "EdgeSequenceReport",
    "GammaVerdict",
    "check_nondegenerate",
    "edge_admissibility",
    "edge_locally_admissible",
    "gamma_admissibility",
    "pair_globalisable",
]
