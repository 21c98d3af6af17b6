"""Lattice polygons: convex hulls of finite sets of integral points.

Vertices are kept in counter-clockwise order without collinear points. A
polygon may be degenerate (a point or a segment); such polygons have no
interior points and their "edges" are the segment traversed both ways.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Iterator, NamedTuple

import sympy

from trlimits.algebra import ExtFraction
from trlimits.errors import DomainError, InternalEngineError


class LatticePoint(NamedTuple):
    """An integral point ``(i, j)``: the exponent of ``x^i y^j``."""

    i: int
    j: int


def cross(o: tuple[int, int], a: tuple[int, int], b: tuple[int, int]) -> int:
    """Twice the signed area of the triangle ``o, a, b``."""

    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points: Iterable[tuple[int, int]]) -> tuple[LatticePoint, ...]:
    """Monotone chain; counter-clockwise, starting at the lowest-leftmost point."""

    pts = sorted({LatticePoint(int(p[0]), int(p[1])) for p in points})
    if len(pts) <= 2:
        return tuple(pts)
    lower: list[LatticePoint] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[LatticePoint] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return (hull[0],)
    return tuple(hull)


@dataclass(frozen=True, slots=True)
class MaximalEdge:
    """A maximal boundary segment, oriented counter-clockwise.

    ``length`` is its lattice length: the number of edges (segments without
    integral points in between) it is made of.
    """

    start: LatticePoint
    end: LatticePoint

    @property
    def vector(self) -> tuple[int, int]:
        return (self.end.i - self.start.i, self.end.j - self.start.j)

    @property
    def length(self) -> int:
        di, dj = self.vector
        return math.gcd(di, dj)

    @property
    def outward_normal(self) -> tuple[int, int]:
        di, dj = self.vector
        return (dj, -di)

    @property
    def slope(self) -> ExtFraction:
        """``dj / di`` with infinity for vertical edges."""

        di, dj = self.vector
        return ExtFraction(dj, di) if di else ExtFraction.infinity()

    def points(self) -> list[LatticePoint]:
        """Integral points from ``start`` to ``end`` inclusive."""

        di, dj = self.vector
        n = self.length
        return [LatticePoint(self.start.i + k * di // n, self.start.j + k * dj // n) for k in range(n + 1)]

    def unit_edges(self) -> list[tuple[LatticePoint, LatticePoint]]:
        pts = self.points()
        return list(zip(pts, pts[1:]))


@dataclass(frozen=True)
class LatticePolygon:
    """Convex hull of ``support``; the support keeps the monomials it came from."""

    support: frozenset[LatticePoint]
    vertices: tuple[LatticePoint, ...]

    def __post_init__(self) -> None:
        if not self.support:
            raise DomainError("a polygon needs at least one point")

    @classmethod
    def from_points(cls, points: Iterable[tuple[int, int]]) -> "LatticePolygon":
        support = frozenset(LatticePoint(int(p[0]), int(p[1])) for p in points)
        if not support:
            raise DomainError("a polygon needs at least one point")
        if any(p.i < 0 or p.j < 0 for p in support):
            raise DomainError("Newton polygons live in the non-negative quadrant")
        return cls(support, convex_hull(support))

    # -- shape -----------------------------------------------------------

    @property
    def dimension(self) -> int:
        return min(len(self.vertices) - 1, 2)

    @property
    def bidegree(self) -> tuple[int, int]:
        return (max(p.i for p in self.vertices), max(p.j for p in self.vertices))

    def is_inscribed(self) -> bool:
        """Touches all four sides of ``[0, d_x] x [0, d_y]`` with positive bidegree."""

        dx, dy = self.bidegree
        return (
            dx > 0
            and dy > 0
            and min(p.i for p in self.vertices) == 0
            and min(p.j for p in self.vertices) == 0
        )

    def is_long_diagonal(self) -> bool:
        dx, dy = self.bidegree
        if math.gcd(dx, dy) == 1 or self.dimension != 1:
            return False
        ends = set(self.vertices)
        return ends == {(0, 0), (dx, dy)} or ends == {(dx, 0), (0, dy)}

    @cached_property
    def maximal_edges(self) -> tuple[MaximalEdge, ...]:
        if self.dimension == 0:
            return ()
        n = len(self.vertices)
        return tuple(MaximalEdge(self.vertices[k], self.vertices[(k + 1) % n]) for k in range(n))

    def edge_count(self) -> int:
        if self.dimension < 2:
            return self.maximal_edges[0].length if self.maximal_edges else 0
        return sum(e.length for e in self.maximal_edges)

    # -- membership ------------------------------------------------------

    def contains(self, point: tuple[int, int]) -> bool:
        """Closed membership."""

        if self.dimension == 0:
            return tuple(point) == tuple(self.vertices[0])
        if self.dimension == 1:
            a, b = self.vertices
            if cross(a, b, point) != 0:
                return False
            return min(a.i, b.i) <= point[0] <= max(a.i, b.i) and min(a.j, b.j) <= point[1] <= max(a.j, b.j)
        return all(cross(e.start, e.end, point) >= 0 for e in self.maximal_edges)

    def strictly_contains(self, point: tuple[int, int]) -> bool:
        if self.dimension < 2:
            return False
        return all(cross(e.start, e.end, point) > 0 for e in self.maximal_edges)

    def box_points(self) -> Iterator[LatticePoint]:
        lo_i = min(p.i for p in self.vertices)
        lo_j = min(p.j for p in self.vertices)
        dx, dy = self.bidegree
        for i in range(lo_i, dx + 1):
            for j in range(lo_j, dy + 1):
                yield LatticePoint(i, j)

    @cached_property
    def lattice_points(self) -> frozenset[LatticePoint]:
        return frozenset(p for p in self.box_points() if self.contains(p))

    @cached_property
    def interior_points(self) -> frozenset[LatticePoint]:
        return frozenset(p for p in self.box_points() if self.strictly_contains(p))

    @property
    def boundary_points(self) -> frozenset[LatticePoint]:
        return self.lattice_points - self.interior_points

    def interior_count(self) -> int:
        return len(self.interior_points)

    # -- measure ---------------------------------------------------------

    def area(self) -> Fraction:
        """Shoelace area."""

        if self.dimension < 2:
            return Fraction(0)
        origin = self.vertices[0]
        twice = sum(
            cross(origin, self.vertices[k], self.vertices[k + 1]) for k in range(1, len(self.vertices) - 1)
        )
        return Fraction(twice, 2)

    def pick_area(self) -> Fraction:
        """Area, checked against Pick's formula ``B / 2 + I - 1``."""

        if self.dimension < 2:
            raise DomainError("Pick's formula needs a two-dimensional polygon")
        area = self.area()
        pick = Fraction(len(self.boundary_points), 2) + self.interior_count() - 1
        if area != pick:
            raise InternalEngineError(f"shoelace area {area} disagrees with Pick count {pick}")
        return area

    # -- derived polygons ------------------------------------------------

    def with_point(self, point: tuple[int, int]) -> "LatticePolygon":
        return LatticePolygon.from_points(set(self.vertices) | {tuple(point)})

    def equivalent_to(self, other: "LatticePolygon") -> bool:
        """Same bidegree and same interior points, both inscribed."""

        return (
            self.is_inscribed()
            and other.is_inscribed()
            and self.bidegree == other.bidegree
            and self.interior_points == other.interior_points
        )

    def describe(self) -> dict[str, Any]:
        return {
            "vertices": [list(v) for v in self.vertices],
            "bidegree": list(self.bidegree),
            "inscribed": self.is_inscribed(),
            "interior_points": sorted(list(p) for p in self.interior_points),
            "maximal_edges": [
                {
                    "start": list(e.start),
                    "end": list(e.end),
                    "slope": str(e.slope),
                    "edges": e.length,
                }
                for e in self.maximal_edges
            ],
        }

    def __repr__(self) -> str:
        return f"LatticePolygon({[tuple(v) for v in self.vertices]})"


def build_polygon(support: Iterable[tuple[int, int]]) -> LatticePolygon:
    return LatticePolygon.from_points(support)


def polynomial_support(expr: Any, x: Any = None, y: Any = None) -> list[LatticePoint]:
    """Exponents ``(i, j)`` of the monomials ``x^i y^j`` of a sympy polynomial."""

    x = x if x is not None else sympy.Symbol("x")
    y = y if y is not None else sympy.Symbol("y")
    try:
        poly = sympy.Poly(sympy.expand(sympy.sympify(expr)), x, y)
    except sympy.PolynomialError as exc:
        raise DomainError(f"not a polynomial in {x}, {y}: {expr}") from exc
    if poly.is_zero:
        raise DomainError("the zero polynomial has no Newton polygon")
    return [LatticePoint(i, j) for (i, j) in poly.monoms()]


def newton_polygon(expr: Any, x: Any = None, y: Any = None) -> LatticePolygon:
    """Newton polygon of ``P(x, y)``: the hull of its support."""

    return LatticePolygon.from_points(polynomial_support(expr, x, y))


__all__ = [
    "LatticePoint",
    "LatticePolygon",
    "MaximalEdge",
    "build_polygon",
    "convex_hull",
    "cross",
    "newton_polygon",
    "polynomial_support",
]
