"""Corners of an inscribed polygon and the local data read off its edges.

The rectangle ``[0, d_x] x [0, d_y]`` splits into the interior of the polygon and
four corner regions, one per point ``(x, y) in {0, oo}^2``. A corner region is
the Newton diagram of the polynomial rewritten in the matching affine patch, so
each corner is computed by flipping coordinates and reusing the ``(0, 0)``
routine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Literal

from trlimits.algebra import ExtFraction
from trlimits.errors import DomainError, InternalEngineError

from .lattice import LatticePoint, LatticePolygon

Corner = Literal["00", "0oo", "oo0", "oooo"]

CORNERS: tuple[Corner, ...] = ("00", "0oo", "oo0", "oooo")

# (flip i, flip j) taking the corner to the origin
_FLIPS: dict[str, tuple[bool, bool]] = {
    "00": (False, False),
    "0oo": (False, True),
    "oo0": (True, False),
    "oooo": (True, True),
}


def _flip(point: tuple[int, int], corner: str, bidegree: tuple[int, int]) -> tuple[int, int]:
    fi, fj = _FLIPS[corner]
    dx, dy = bidegree
    return (dx - point[0] if fi else point[0], dy - point[1] if fj else point[1])


def _lowest_on_vertical(vertices: tuple[tuple[int, int], ...], a: Fraction) -> Fraction | None:
    """Least ``j`` of the hull on the line ``i = a`` (``None`` when the line misses it)."""

    best: Fraction | None = None
    n = len(vertices)
    for k in range(n):
        p, q = vertices[k], vertices[(k + 1) % n]
        if p[0] == q[0]:
            if p[0] == a:
                cand = Fraction(min(p[1], q[1]))
                best = cand if best is None else min(best, cand)
            continue
        lo, hi = sorted((p[0], q[0]))
        if lo <= a <= hi:
            cand = Fraction(p[1]) + Fraction(q[1] - p[1], q[0] - p[0]) * (a - p[0])
            best = cand if best is None else min(best, cand)
    return best


def _in_open_upper_set(vertices: tuple[tuple[int, int], ...], point: tuple[int, int]) -> bool:
    """Whether ``point`` lies in the interior of ``hull + R_{>=0}^2``.

    That interior is ``hull + R_{>0}^2``: some hull point is strictly below and
    strictly left of ``point``. The lower profile of the hull is convex, so it is
    enough to inspect the vertex abscissae left of ``point`` and the abscissa
    ``min(point_i, max_i)`` itself.
    """

    xs = [v[0] for v in vertices]
    lo, hi = min(xs), max(xs)
    if point[0] <= lo:
        return False
    candidates = {Fraction(x) for x in xs if x < point[0]}
    candidates.add(Fraction(min(point[0], hi)))
    for a in candidates:
        low = _lowest_on_vertical(vertices, a)
        if low is not None and low < point[1]:
            return True
    return False


@dataclass(frozen=True, slots=True)
class CornerDiagram:
    """Off-axis lattice points of each corner region, and the interior count.

    ``counts[c]`` bounds the delta-invariant of the singularity at the corner
    point ``c`` and is equal to it for nondegenerate curves.
    """

    bidegree: tuple[int, int]
    interior: int
    points: dict[str, frozenset[LatticePoint]]

    @property
    def counts(self) -> dict[str, int]:
        return {c: len(self.points[c]) for c in CORNERS}

    def total(self) -> int:
        return self.interior + sum(self.counts.values())

    def satisfies_rectangle_identity(self) -> bool:
        dx, dy = self.bidegree
        return self.total() == (dx - 1) * (dy - 1)

    def describe(self) -> dict[str, Any]:
        return {"interior": self.interior, "corners": self.counts}


def corner_points(polygon: LatticePolygon, corner: str) -> frozenset[LatticePoint]:
    """Lattice points of the open rectangle lying in the corner region ``corner``."""

    if corner not in _FLIPS:
        raise DomainError(f"unknown corner {corner!r}; expected one of {CORNERS}")
    bidegree = polygon.bidegree
    flipped = tuple(_flip(v, corner, bidegree) for v in polygon.vertices)
    dx, dy = bidegree
    found: set[LatticePoint] = set()
    for i in range(1, dx):
        for j in range(1, dy):
            if not _in_open_upper_set(flipped, _flip((i, j), corner, bidegree)):
                found.add(LatticePoint(i, j))
    return frozenset(found)


def corner_counts(polygon: LatticePolygon) -> CornerDiagram:
    if not polygon.is_inscribed():
        raise DomainError(f"{polygon!r} is not inscribed in its bounding rectangle")
    return CornerDiagram(
        polygon.bidegree,
        polygon.interior_count(),
        {c: corner_points(polygon, c) for c in CORNERS},
    )


def interior_count(polygon: LatticePolygon) -> int:
    return polygon.interior_count()


def genus_bound(polygon: LatticePolygon) -> int:
    """Interior point count: the genus for nondegenerate curves, an upper bound otherwise."""

    return polygon.interior_count()


# -- edges -----------------------------------------------------------------


def _corner_of_normal(normal: tuple[int, int]) -> str | None:
    ni, nj = normal
    if ni == 0 or nj == 0:
        return None
    return {(False, False): "00", (False, True): "0oo", (True, False): "oo0", (True, True): "oooo"}[
        (ni > 0, nj > 0)
    ]


@dataclass(frozen=True, slots=True)
class EdgeLocal:
    """An edge of a corner with the local parameters of its branch.

    ``slope`` is the absolute slope ``r / k`` with ``(r, k)`` the Puiseux
    parameters; ``multiplicity`` counts the edges of the same maximal edge.
    """

    corner: str
    slope: ExtFraction
    r: int
    k: int
    s_bar: int
    multiplicity: int = 1
    start: LatticePoint | None = None
    end: LatticePoint | None = None

    def __post_init__(self) -> None:
        if self.r < 1 or self.k < 1:
            raise ValueError("corner edges have positive finite slopes")

    @property
    def nu(self) -> ExtFraction:
        return ExtFraction(self.s_bar, self.r)

    @property
    def s(self) -> int | float:
        """Equal to ``s_bar`` except for unramified branches, where it is infinite."""

        return float("inf") if self.r == 1 else self.s_bar

    def describe(self) -> dict[str, Any]:
        return {
            "corner": self.corner,
            "slope": str(self.slope),
            "r": self.r,
            "s_bar": self.s_bar,
            "nu": str(self.nu),
            "edges": self.multiplicity,
        }


def edge_local(corner: str, r: int, k: int, **extra: Any) -> EdgeLocal:
    """Local data of an edge with Puiseux parameters ``(r, k)`` in ``corner``."""

    s_bar = {"00": r + k, "0oo": r - k, "oo0": k - r, "oooo": -r - k}[corner]
    return EdgeLocal(corner, ExtFraction(r, k), r, k, s_bar, **extra)


def edge_from_slope(corner: str, slope: ExtFraction | Fraction | int | str) -> EdgeLocal:
    mu = ExtFraction.of(slope)
    if mu.is_infinite or mu.num <= 0:
        raise DomainError(f"corner edges have positive finite slopes, got {mu}")
    return edge_local(corner, mu.num, mu.den)


def corner_edges(polygon: LatticePolygon, corner: str) -> list[EdgeLocal]:
    """Edges of ``polygon`` bounding the corner region ``corner``.

    A maximal edge of lattice length ``l`` yields ``l`` entries with the same
    slope. In the corners ``0oo`` and ``oo0`` slopes are listed in increasing
    order.
    """

    if corner not in _FLIPS:
        raise DomainError(f"unknown corner {corner!r}; expected one of {CORNERS}")
    found: list[EdgeLocal] = []
    for edge in polygon.maximal_edges:
        if _corner_of_normal(edge.outward_normal) != corner:
            continue
        di, dj = edge.vector
        length = edge.length
        r, k = abs(dj) // length, abs(di) // length
        for start, end in edge.unit_edges():
            found.append(edge_local(corner, r, k, multiplicity=length, start=start, end=end))
    found.sort(key=lambda e: e.slope)
    return found


def puiseux_parameters(edge: EdgeLocal) -> tuple[int, int]:
    """``(r, k)``: ramification and valuation numerator of the Puiseux series."""

    return edge.r, edge.k


def check_corner_identity(polygon: LatticePolygon) -> CornerDiagram:
    diagram = corner_counts(polygon)
    if polygon.dimension == 2 and not diagram.satisfies_rectangle_identity():
        raise InternalEngineError(
            f"corner counts {diagram.counts} and interior {diagram.interior} do not fill "
            f"the rectangle of bidegree {diagram.bidegree}"
        )
    return diagram


__all__ = [
    "CORNERS",
    "CornerDiagram",
    "EdgeLocal",
    "check_corner_identity",
    "corner_counts",
    "corner_edges",
    "corner_points",
    "edge_from_slope",
    "edge_local",
    "genus_bound",
    "interior_count",
    "puiseux_parameters",
]
