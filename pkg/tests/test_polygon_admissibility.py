import random

import pytest

from trlimits.errors import DomainError
from trlimits.polygon import (
    LatticePolygon,
    addible_vertices,
    add_vertex,
    build_polygon,
    check_nondegenerate,
    diagonal_polygon,
    edge_admissibility,
    edge_from_slope,
    edge_local,
    edge_locally_admissible,
    gamma_admissibility,
    pair_globalisable,
)


def make_pair(corner: str, first: tuple[int, int], second: tuple[int, int]):
    return edge_local(corner, *first), edge_local(corner, *second)


def test_edge_local_data_per_corner() -> None:
    top_left = edge_local("0oo", 3, 1)
    bottom_right = edge_local("oo0", 7, 2)

    assert (top_left.s_bar, top_left.s) == (2, 2)
    assert (bottom_right.s_bar, str(bottom_right.nu)) == (-5, "-5/7")
    assert edge_local("0oo", 1, 2).s == float("inf")
    with pytest.raises(DomainError):
        edge_from_slope("0oo", 0)


def test_local_edge_rule() -> None:
    assert edge_locally_admissible(edge_local("0oo", 1, 1))
    assert edge_locally_admissible(edge_local("0oo", 3, 1))
    assert edge_locally_admissible(edge_local("0oo", 5, 2))
    assert not edge_locally_admissible(edge_local("0oo", 7, 2))
    # r = 2, s_bar = 5: mu < 1 and 2 does not divide s_bar + 1
    assert not edge_locally_admissible(edge_local("oo0", 2, 7))
    assert edge_locally_admissible(edge_local("oo0", 7, 2))
    with pytest.raises(DomainError):
        edge_locally_admissible(edge_local("00", 1, 1))


def test_coincident_slopes_in_the_top_left_corner() -> None:
    # mu = r / (r - 1)
    assert pair_globalisable(*make_pair("0oo", (3, 2), (3, 2))) == (True, "G2")
    assert pair_globalisable(*make_pair("0oo", (3, 1), (3, 1))) == (False, None)
    assert pair_globalisable(*make_pair("0oo", (1, 1), (1, 1))) == (True, "G3")


def test_top_left_pairs_through_an_intermediate_slope() -> None:
    # 1/mu in {1/4, 2/3}: m = 2 gives 1/2 in between
    ok, rule = pair_globalisable(*make_pair("0oo", (4, 1), (3, 2)))

    assert (ok, rule) == (True, "G1")


def test_bottom_right_pairs() -> None:
    assert pair_globalisable(*make_pair("oo0", (2, 3), (1, 1))) == (True, "G3'")
    assert pair_globalisable(*make_pair("oo0", (2, 3), (1, 2)))[0]
    # coincident slope r / (r + 1)
    assert pair_globalisable(*make_pair("oo0", (3, 4), (3, 4))) == (True, "G2'")
    assert pair_globalisable(*make_pair("oo0", (1, 3), (1, 3))) == (False, None)
    # 1/mu_j = 5/2 exceeds 3/2, and 2/5 is not of the form (r - 1)/r
    assert pair_globalisable(*make_pair("oo0", (2, 5), (2, 5))) == (False, None)


def test_pairs_from_different_corners_are_rejected() -> None:
    with pytest.raises(DomainError):
        pair_globalisable(edge_local("0oo", 1, 1), edge_local("oo0", 1, 1))
    with pytest.raises(DomainError):
        edge_admissibility("00", [])
    with pytest.raises(DomainError):
        edge_admissibility("0oo", [edge_local("oo0", 1, 1)])


def test_seven_five_diagonal_fails_in_the_top_left_corner() -> None:
    verdict = gamma_admissibility(diagonal_polygon(7, 5))

    assert not verdict.admissible
    assert verdict.failed_conditions() == ["GA2"]
    assert verdict.bottom_right.admissible
    assert any("slope 7/2" in reason for reason in verdict.reasons)


def test_admissible_diagonals() -> None:
    for r, s in [(5, 3), (3, 1), (2, 1), (3, 2), (7, 6), (5, 4)]:
        assert gamma_admissibility(diagonal_polygon(r, s)).admissible, (r, s)


def test_seven_five_deformation_polygon_is_not_globally_admissible() -> None:
    verdict = gamma_admissibility(build_polygon([(0, 0), (0, 1), (2, 7)]))

    assert verdict.failed_conditions() == ["GA2"]
    pairs = verdict.top_left.describe()["pairs"]
    assert pairs == [{"edges": [0, 1], "globalisable": False, "rule": None}]


def test_singular_origin_fails_first_condition() -> None:
    verdict = gamma_admissibility(build_polygon([(2, 0), (0, 2), (2, 2)]))

    assert "GA1" in verdict.failed_conditions()
    assert verdict.describe()["smooth_origin"] is False


def test_gamma_admissibility_requires_nondegeneracy() -> None:
    with pytest.raises(DomainError):
        gamma_admissibility(diagonal_polygon(5, 3), nondegenerate=False)


def test_check_nondegenerate() -> None:
    assert check_nondegenerate("x**2*y**7 - y - 1")
    assert check_nondegenerate("x**2*y**7 - t**2*y - 1", substitutions={"t": 3})
    # edge polynomial (y - 1)**2 on the vertical edge
    assert not check_nondegenerate("y**2 - 2*y + 1 + x")
    # node at (1, 1)
    assert not check_nondegenerate("(x - 1)**2 - (y - 1)**2 + (x - 1)**3")
    with pytest.raises(DomainError):
        check_nondegenerate("x*y - t")


def build_random_class_member(rng: random.Random, width: int, height: int) -> LatticePolygon | None:
    points = {(rng.randint(0, width), rng.randint(0, height)) for _ in range(rng.randint(2, 6))}
    points |= {(0, rng.randint(0, height)), (rng.randint(0, width), 0), (width, rng.randint(0, height))}
    points.add((rng.randint(0, width), height))
    polygon = build_polygon(points)
    if polygon.dimension < 2 or not polygon.is_inscribed():
        return None
    return polygon


@pytest.mark.slow
def test_verdict_is_constant_under_addible_vertex_addition() -> None:
    rng = random.Random(5)
    checked = 0
    for _ in range(400):
        polygon = build_random_class_member(rng, rng.randint(1, 6), rng.randint(1, 6))
        if polygon is None or polygon.is_long_diagonal():
            continue
        verdict = gamma_admissibility(polygon).admissible
        for point in sorted(addible_vertices(polygon)):
            larger = add_vertex(polygon, point)
            assert gamma_admissibility(larger).admissible == verdict, (polygon, point)
            checked += 1
    assert checked > 0
