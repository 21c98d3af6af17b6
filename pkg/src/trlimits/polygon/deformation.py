"""Adding and removing vertices inside an equivalence class of inscribed polygons.

Two inscribed polygons are equivalent when they share the bidegree and the set
of interior points. Adding an addible vertex enlarges the polygon within its
class; all addible vertices can be added in any order, which gives the maximal
polygon of the strong class (unless the polygon is a long diagonal).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from trlimits.algebra import ExtFraction, farey_neighbours
from trlimits.errors import DomainError, InternalEngineError
from trlimits.runtime.telemetry import record_event, span

from .lattice import LatticePoint, LatticePolygon

LOGGER_NAME = "trlimits.polygon"


def _require_deformable(polygon: LatticePolygon) -> None:
    if not polygon.is_inscribed():
        raise DomainError(f"{polygon!r} is not inscribed in its bounding rectangle")
    if polygon.is_long_diagonal():
        raise DomainError(f"{polygon!r} is a long diagonal; its class has no maximal polygon")


def is_addible(polygon: LatticePolygon, point: tuple[int, int]) -> bool:
    dx, dy = polygon.bidegree
    if not (0 <= point[0] <= dx and 0 <= point[1] <= dy) or polygon.contains(point):
        return False
    return polygon.with_point(point).equivalent_to(polygon)


def addible_vertices(polygon: LatticePolygon) -> frozenset[LatticePoint]:
    """Every lattice point whose addition keeps the bidegree and the interior points."""

    _require_deformable(polygon)
    dx, dy = polygon.bidegree
    return frozenset(
        LatticePoint(i, j) for i in range(dx + 1) for j in range(dy + 1) if is_addible(polygon, (i, j))
    )


def _without(polygon: LatticePolygon, point: tuple[int, int]) -> LatticePolygon | None:
    rest = polygon.lattice_points - {LatticePoint(*point)}
    if not rest:
        return None
    return LatticePolygon.from_points(rest)


def is_removable(polygon: LatticePolygon, point: tuple[int, int]) -> bool:
    """``point`` is a vertex and some equivalent polygon plus ``point`` gives back ``polygon``.

    The largest candidate is the hull of the other lattice points, so it is the
    only one that needs testing.
    """

    if LatticePoint(*point) not in polygon.vertices:
        return False
    smaller = _without(polygon, point)
    return smaller is not None and smaller.equivalent_to(polygon)


def removable_vertices(polygon: LatticePolygon) -> frozenset[LatticePoint]:
    if not polygon.is_inscribed():
        raise DomainError(f"{polygon!r} is not inscribed in its bounding rectangle")
    return frozenset(v for v in polygon.vertices if is_removable(polygon, v))


def remove_vertex(polygon: LatticePolygon, point: tuple[int, int]) -> LatticePolygon:
    if not polygon.is_inscribed():
        raise DomainError(f"{polygon!r} is not inscribed in its bounding rectangle")
    if not is_removable(polygon, point):
        raise DomainError(f"{tuple(point)} is not removable from {polygon!r}")
    smaller = _without(polygon, point)
    assert smaller is not None
    return smaller


def add_vertex(polygon: LatticePolygon, point: tuple[int, int]) -> LatticePolygon:
    _require_deformable(polygon)
    if not is_addible(polygon, point):
        raise DomainError(f"{tuple(point)} is not addible to {polygon!r}")
    return polygon.with_point(point)


def maximal_polygon(polygon: LatticePolygon) -> LatticePolygon:
    """Add addible vertices until none is left."""

    with span("polygon::maximal_polygon", logger_name=LOGGER_NAME, metadata={"polygon": repr(polygon)}) as handle:
        _require_deformable(polygon)
        current = polygon
        rounds = 0
        while True:
            candidates = sorted(addible_vertices(current))
            if not candidates:
                break
            rounds += 1
            for point in candidates:
                if is_addible(current, point):
                    current = current.with_point(point)
        if not current.equivalent_to(polygon):
            raise InternalEngineError(f"maximal polygon {current!r} left the class of {polygon!r}")
        handle.add_metadata("rounds", rounds)
        return current


def minimal_polygons(polygon: LatticePolygon, *, limit: int = 512) -> list[LatticePolygon]:
    """Every polygon reachable by removals that admits no further removal.

    Classes may have several minimal elements; all of them are listed, ordered
    by their vertex lists. ``limit`` bounds the number of polygons visited.
    """

    if not polygon.is_inscribed():
        raise DomainError(f"{polygon!r} is not inscribed in its bounding rectangle")
    seen: set[tuple[LatticePoint, ...]] = set()
    minimal: dict[tuple[LatticePoint, ...], LatticePolygon] = {}
    stack = [polygon]
    while stack:
        current = stack.pop()
        key = current.vertices
        if key in seen:
            continue
        seen.add(key)
        if len(seen) > limit:
            record_event(
                "polygon.minimal_search_truncated",
                level="warning",
                data={"polygon": repr(polygon), "limit": limit},
                logger_name=LOGGER_NAME,
            )
            break
        removable = removable_vertices(current)
        if not removable:
            minimal[key] = current
            continue
        stack.extend(remove_vertex(current, v) for v in sorted(removable))
    return [minimal[k] for k in sorted(minimal)]


@dataclass(frozen=True, slots=True)
class RsMaximal:
    """Maximal polygon of the ``(r, s)`` class with the data that parametrizes it.

    ``case`` is ``"F+"``, ``"F-"`` or ``"F+-"`` (both descriptions agree, ``b = c = 1``).
    ``apex`` is the vertex above the diagonal, ``foot`` the one below it.
    """

    r: int
    s: int
    polygon: LatticePolygon
    case: str
    r_prime: int
    s_prime: int
    b: int
    c: int
    apex: LatticePoint
    foot: LatticePoint

    def describe(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "s": self.s,
            "case": self.case,
            "r_prime": self.r_prime,
            "s_prime": self.s_prime,
            "b": self.b,
            "c": self.c,
            "vertices": [list(v) for v in self.polygon.vertices],
        }


def diagonal_polygon(r: int, s: int) -> LatticePolygon:
    """Newton polygon of ``x^(r-s) y^r - 1``."""

    return LatticePolygon.from_points([(0, 0), (r - s, r)])


def rs_delta_max(r: int, s: int) -> RsMaximal:
    """Closed form of the maximal polygon in the class of ``[(0,0), (r-s, r)]``."""

    if r < 2 or not 1 <= s <= r - 1:
        raise DomainError(f"need r >= 2 and 1 <= s <= r - 1, got ({r}, {s})")
    if math.gcd(r, s) != 1:
        raise DomainError(f"r = {r} and s = {s} are not coprime")
    left, _ = farey_neighbours(ExtFraction(r - s, r), r)
    r_prime = left.den
    s_prime = r_prime - left.num
    b = r // r_prime
    c = (r - s) // ((r - s) - (r_prime - s_prime))
    if c == 1:
        p, q = b * r_prime, b * s_prime
        case = "F+-" if b == 1 else "F+"
    elif b == 1:
        p, q = r - c * (r - r_prime), s - c * (s - s_prime)
        case = "F-"
    else:
        raise InternalEngineError(f"neither description applies to ({r}, {s}): b = {b}, c = {c}")
    apex = LatticePoint(p - q, p)
    foot = LatticePoint((r - p) - (s - q), r - p)
    polygon = LatticePolygon.from_points([(0, 0), (r - s, r), apex, foot])
    return RsMaximal(r, s, polygon, case, r_prime, s_prime, b, c, apex, foot)


__all__ = [
    "RsMaximal",
    "add_vertex",
    "addible_vertices",
    "diagonal_polygon",
    "is_addible",
    "is_removable",
    "maximal_polygon",
    "minimal_polygons",
    "remove_vertex",
    "removable_vertices",
    "rs_delta_max",
]
