"""Elementary lattice triangles and their Farey description."""

from __future__ import annotations

from typing import Iterable

from trlimits.algebra import ExtFraction, farey_neighbours
from trlimits.errors import DomainError

from .lattice import LatticePolygon, cross


def as_triangle(points: LatticePolygon | Iterable[tuple[int, int]]) -> LatticePolygon:
    polygon = points if isinstance(points, LatticePolygon) else LatticePolygon.from_points(points)
    if len(polygon.vertices) != 3:
        raise DomainError(f"{polygon!r} is not a triangle")
    return polygon


def is_elementary_triangle(points: LatticePolygon | Iterable[tuple[int, int]]) -> bool:
    """Only integral points are the three vertices."""

    triangle = as_triangle(points)
    return triangle.lattice_points == frozenset(triangle.vertices)


def has_edge_interior_points(triangle: LatticePolygon) -> bool:
    return any(edge.length > 1 for edge in triangle.maximal_edges)


def triangle_slopes(points: LatticePolygon | Iterable[tuple[int, int]]) -> tuple[ExtFraction, ExtFraction, ExtFraction]:
    """Slopes ``alpha < mu < beta`` of the three edges, all in ``[0, oo]``.

    Raises ``DomainError`` when an edge has negative slope or two edges are
    parallel.
    """

    triangle = as_triangle(points)
    slopes = []
    for edge in triangle.maximal_edges:
        di, dj = edge.vector
        if di * dj < 0:
            raise DomainError(f"edge {edge.start}-{edge.end} has negative slope")
        slopes.append(ExtFraction(abs(dj), abs(di)) if di else ExtFraction.infinity())
    alpha, mu, beta = sorted(slopes)
    if alpha == mu or mu == beta:
        raise DomainError("triangle edges must have distinct slopes")
    return alpha, mu, beta


def farey_triangle_test(alpha: ExtFraction, mu: ExtFraction, beta: ExtFraction) -> bool:
    """``1/beta < 1/mu < 1/alpha`` are Farey neighbours in order ``numerator(mu)``."""

    alpha, mu, beta = (ExtFraction.of(v) for v in (alpha, mu, beta))
    if not (ExtFraction(0) <= alpha < mu < beta):
        raise DomainError(f"slopes must satisfy 0 <= alpha < mu < beta, got {alpha}, {mu}, {beta}")
    if mu.is_infinite:
        raise DomainError("the middle slope must be finite")
    left, right = farey_neighbours(mu.reciprocal(), mu.num)
    return left == beta.reciprocal() and right == alpha.reciprocal()


def is_elementary_by_slopes(points: LatticePolygon | Iterable[tuple[int, int]]) -> bool:
    triangle = as_triangle(points)
    if has_edge_interior_points(triangle):
        return False
    return farey_triangle_test(*triangle_slopes(triangle))


def twice_area(a: tuple[int, int], b: tuple[int, int], c: tuple[int, int]) -> int:
    return abs(cross(a, b, c))


__all__ = [
    "as_triangle",
    "farey_triangle_test",
    "has_edge_interior_points",
    "is_elementary_by_slopes",
    "is_elementary_triangle",
    "triangle_slopes",
    "twice_area",
]
