import random
from fractions import Fraction
from itertools import combinations, product

import pytest
import sympy

from trlimits.algebra import ExtFraction
from trlimits.errors import DomainError
from trlimits.polygon import (
    LatticePolygon,
    add_vertex,
    addible_vertices,
    build_polygon,
    corner_counts,
    corner_edges,
    diagonal_polygon,
    farey_triangle_test,
    interior_count,
    is_elementary_triangle,
    is_removable,
    maximal_polygon,
    minimal_polygons,
    newton_polygon,
    polygon_report,
    polygon_svg,
    remove_vertex,
    removable_vertices,
    rs_delta_max,
    triangle_slopes,
)


def build_random_polygon(rng: random.Random, width: int, height: int) -> LatticePolygon:
    points = {(rng.randint(0, width), rng.randint(0, height)) for _ in range(rng.randint(3, 7))}
    points |= {(0, rng.randint(0, height)), (rng.randint(0, width), 0)}
    return build_polygon(points)


def test_hull_of_the_seven_five_deformation() -> None:
    x, y, t = sympy.symbols("x y t")
    polygon = newton_polygon(x**2 * y**7 - t**2 * y - 1, x, y)

    assert set(polygon.vertices) == {(0, 0), (0, 1), (2, 7)}
    assert polygon.bidegree == (2, 7)
    assert polygon.is_inscribed()


def test_diagonal_and_degenerate_polygons() -> None:
    segment = newton_polygon("x**3*y**5 - 1")
    point = build_polygon([(2, 3)])

    assert segment.vertices == ((0, 0), (3, 5))
    assert segment.dimension == 1
    assert interior_count(segment) == 0
    assert point.dimension == 0
    assert point.maximal_edges == ()


def test_build_polygon_rejects_empty_and_negative_support() -> None:
    with pytest.raises(DomainError):
        build_polygon([])
    with pytest.raises(DomainError):
        build_polygon([(0, 0), (-1, 2)])
    with pytest.raises(DomainError):
        newton_polygon("x/y + 1")


def test_square_has_one_interior_point() -> None:
    square = build_polygon([(0, 0), (2, 0), (0, 2), (2, 2)])

    assert interior_count(square) == 1
    assert square.interior_points == {(1, 1)}
    assert corner_counts(square).counts == {"00": 0, "0oo": 0, "oo0": 0, "oooo": 0}


def test_corner_point_sits_at_infinity() -> None:
    triangle = build_polygon([(0, 0), (2, 0), (0, 2)])
    diagram = corner_counts(triangle)

    assert diagram.counts == {"00": 0, "0oo": 0, "oo0": 0, "oooo": 1}
    assert diagram.satisfies_rectangle_identity()


def test_singular_origin_is_counted_in_its_corner() -> None:
    polygon = build_polygon([(2, 0), (0, 2), (2, 2)])

    assert corner_counts(polygon).counts["00"] == 1


def test_corner_identity_on_random_polygons() -> None:
    rng = random.Random(20240917)
    for _ in range(300):
        polygon = build_random_polygon(rng, rng.randint(1, 6), rng.randint(1, 6))
        if polygon.dimension < 2 or not polygon.is_inscribed():
            continue
        assert corner_counts(polygon).satisfies_rectangle_identity(), polygon


def test_pick_formula() -> None:
    assert build_polygon([(0, 0), (2, 0), (0, 2)]).pick_area() == 2
    assert build_polygon([(0, 0), (1, 0), (0, 1)]).pick_area() == Fraction(1, 2)
    with pytest.raises(DomainError):
        diagonal_polygon(3, 1).pick_area()


def test_pick_formula_on_random_polygons() -> None:
    rng = random.Random(7)
    for _ in range(10_000):
        polygon = build_random_polygon(rng, rng.randint(1, 9), rng.randint(1, 9))
        if polygon.dimension == 2:
            assert polygon.pick_area() == polygon.area()


def test_corner_edges_read_puiseux_data() -> None:
    polygon = build_polygon([(0, 0), (0, 1), (2, 7)])
    top_left = corner_edges(polygon, "0oo")
    bottom_right = corner_edges(polygon, "oo0")

    assert [(e.r, e.k, e.s_bar) for e in top_left] == [(3, 1, 2), (3, 1, 2)]
    assert top_left[0].multiplicity == 2
    assert top_left[0].nu == ExtFraction(2, 3)
    assert [(e.r, e.k, e.s_bar) for e in bottom_right] == [(7, 2, -5)]
    assert corner_edges(polygon, "00") == []


def test_farey_description_of_triangles() -> None:
    small = build_polygon([(0, 0), (3, 4), (4, 5)])
    large = build_polygon([(0, 0), (1, 3), (4, 5)])

    assert is_elementary_triangle(small)
    assert farey_triangle_test(*triangle_slopes(small))
    assert [s.reciprocal() for s in triangle_slopes(large)] == [
        ExtFraction(3, 2),
        ExtFraction(4, 5),
        ExtFraction(1, 3),
    ]
    assert not farey_triangle_test(*triangle_slopes(large))
    assert large.interior_count() == 3
    assert is_elementary_triangle([(0, 0), (1, 0), (0, 1)])
    assert farey_triangle_test(ExtFraction(0), ExtFraction(1), ExtFraction.infinity())


@pytest.mark.slow
def test_elementary_triangles_are_farey_triples_in_an_eight_box() -> None:
    box = list(product(range(8), repeat=2))
    checked = 0
    for a, b, c in combinations(box, 3):
        if (b[0] - a[0]) * (c[1] - a[1]) == (b[1] - a[1]) * (c[0] - a[0]):
            continue
        triangle = build_polygon([a, b, c])
        if any(edge.length > 1 for edge in triangle.maximal_edges):
            continue
        try:
            slopes = triangle_slopes(triangle)
        except DomainError:
            continue
        assert is_elementary_triangle(triangle) == farey_triangle_test(*slopes), triangle
        checked += 1
    assert checked > 0


def test_addible_vertices_of_the_seven_five_diagonal() -> None:
    addible = addible_vertices(diagonal_polygon(7, 5))

    assert (0, 1) in addible
    assert (2, 6) in addible
    assert (1, 3) in addible
    # two interior points in the triangle with the diagonal
    assert (1, 1) not in addible


def test_full_rectangle_has_nothing_to_add() -> None:
    rectangle = build_polygon([(0, 0), (3, 0), (0, 2), (3, 2)])

    assert addible_vertices(rectangle) == frozenset()
    assert maximal_polygon(rectangle).vertices == rectangle.vertices


def test_long_diagonal_is_rejected() -> None:
    long_diagonal = build_polygon([(0, 0), (2, 4)])

    assert long_diagonal.is_long_diagonal()
    with pytest.raises(DomainError):
        addible_vertices(long_diagonal)
    with pytest.raises(DomainError):
        maximal_polygon(long_diagonal)


def test_removals_need_not_commute() -> None:
    polygon = build_polygon([(0, 0), (4, 0), (4, 8), (2, 5), (1, 3)])
    v, w = (1, 3), (2, 5)

    assert {v, w} <= removable_vertices(polygon)
    smaller = remove_vertex(polygon, v)
    assert not is_removable(smaller, w)
    assert add_vertex(smaller, v).vertices == polygon.vertices
    assert len(minimal_polygons(polygon)) >= 1


def test_maximal_polygons_of_diagonals() -> None:
    assert set(maximal_polygon(diagonal_polygon(7, 5)).vertices) == {(0, 0), (0, 1), (2, 6), (2, 7)}
    assert set(maximal_polygon(diagonal_polygon(3, 1)).vertices) == {(0, 0), (0, 1), (2, 2), (2, 3)}


def test_rs_delta_max_closed_forms() -> None:
    seven_five = rs_delta_max(7, 5)
    two_one = rs_delta_max(2, 1)
    top = rs_delta_max(6, 5)

    assert (seven_five.case, seven_five.r_prime, seven_five.s_prime) == ("F-", 4, 3)
    assert (seven_five.b, seven_five.c) == (1, 2)
    assert set(seven_five.polygon.vertices) == {(0, 0), (0, 1), (2, 6), (2, 7)}
    assert (two_one.case, two_one.r_prime, two_one.s_prime, two_one.b) == ("F+", 1, 1, 2)
    assert set(two_one.polygon.vertices) == {(0, 0), (0, 2), (1, 0), (1, 2)}
    assert (top.s_prime, top.b) == (1, 6)
    assert set(rs_delta_max(3, 1).polygon.vertices) == {(0, 0), (0, 1), (2, 2), (2, 3)}


def test_rs_delta_max_rejects_bad_types() -> None:
    with pytest.raises(DomainError):
        rs_delta_max(6, 4)
    with pytest.raises(DomainError):
        rs_delta_max(5, 5)
    with pytest.raises(DomainError):
        rs_delta_max(1, 1)


@pytest.mark.slow
@pytest.mark.parametrize("r", range(2, 11))
def test_rs_delta_max_agrees_with_the_search(r: int) -> None:
    for s in range(1, r):
        if Fraction(s, r).denominator != r:
            continue
        expected = rs_delta_max(r, s).polygon.vertices
        assert maximal_polygon(diagonal_polygon(r, s)).vertices == expected, (r, s)


def test_polygon_report_and_svg() -> None:
    polygon = diagonal_polygon(5, 3)
    report = polygon_report(polygon)
    picture = polygon_svg(polygon, title="(5,3)")

    assert report["schema"] == 1
    assert report["genus"] == 0
    assert report["gamma_admissibility"]["admissible"] is True
    assert report["maximal_polygon"] == [list(v) for v in rs_delta_max(5, 3).polygon.vertices]
    assert picture.startswith("<svg")
    assert "<title>(5,3)</title>" in picture
    assert picture.count("<circle") == len(polygon.lattice_points)
