import math
from fractions import Fraction
from itertools import product

import pytest

from trlimits.curve.admissibility import admissibility_of_type
from trlimits.errors import DomainError, ParseError
from trlimits.globalization import (
    FamilySample,
    FiberData,
    LocalData,
    bks_predicates,
    family_admissibility_report,
    fiber_globalisable,
    fibers_from_json,
    globalisation_rule,
    is_non_resonant,
    pair_satisfies_C1C2,
    pair_satisfies_Ci_Cii,
    separates_fibres,
)
from trlimits.polygon import edge_local, pair_globalisable


def make_unramified(s_bar: int, tau: int) -> LocalData:
    return LocalData(1, s_bar, tau=Fraction(tau))


def build_admissible_data(max_r: int, max_s: int) -> list[LocalData]:
    """Every locally admissible ``(r, s_bar, s)`` with ``r <= max_r`` and ``|s_bar| <= max_s``."""

    found = []
    for r in range(1, max_r + 1):
        for s_bar in range(-max_s, max_s + 1):
            if r == 1:
                found.append(LocalData(1, s_bar))
                continue
            s = s_bar if s_bar % r else s_bar + 1
            if admissibility_of_type(r, s, s_bar):
                found.append(LocalData(r, s_bar, s))
    return found


def test_non_resonance() -> None:
    a = LocalData(2, 2, 3, tau=Fraction(4))
    b = LocalData(1, 1, tau=Fraction(3))

    assert a.nu == b.nu
    assert is_non_resonant(a, b)
    assert not is_non_resonant(a, a)
    assert is_non_resonant(make_unramified(1, 5), make_unramified(1, 7))
    assert is_non_resonant(LocalData.of_type(3, 2), LocalData.of_type(4, 3))
    # resonance cannot be excluded without leading coefficients
    assert not is_non_resonant(LocalData(1, 1), LocalData(1, 1))


def test_resonance_sees_only_the_reduced_power() -> None:
    # (tau/r)^r' with r' = 2: tau and -tau are resonant
    a = LocalData(2, 1, 1, tau=Fraction(2))
    b = LocalData(2, 1, 1, tau=Fraction(-2))

    assert a.r_prime == 2
    assert not is_non_resonant(a, b)


def test_floor_conditions_on_worked_pairs() -> None:
    assert pair_satisfies_C1C2(LocalData(1, 1), LocalData(2, 3, 3))
    assert not pair_satisfies_C1C2(LocalData.of_type(3, 2), LocalData.of_type(4, 3))


def test_rewritten_conditions() -> None:
    assert globalisation_rule(LocalData(1, 1), LocalData(2, 3, 3)) == "C-i (m=1)"
    assert globalisation_rule(LocalData.of_type(3, 1), LocalData.of_type(3, 1)) == "C-ii"
    assert globalisation_rule(LocalData.of_type(3, -1), LocalData.of_type(5, 4)) == "C-i (m=2)"
    assert not pair_satisfies_Ci_Cii(LocalData.of_type(3, 2), LocalData.of_type(4, 3))
    assert not pair_satisfies_Ci_Cii(LocalData.of_type(3, 2), LocalData.of_type(3, 2))


@pytest.mark.slow
def test_floor_conditions_agree_with_the_rewritten_form() -> None:
    data = build_admissible_data(8, 9)
    for a, b in product(data, repeat=2):
        assert pair_satisfies_C1C2(a, b) == pair_satisfies_Ci_Cii(a, b), (a, b)


@pytest.mark.parametrize("corner", ["0oo", "oo0"])
def test_polygon_rules_match_the_pair_conditions(corner: str) -> None:
    edges = [
        edge_local(corner, r, k) for r in range(1, 7) for k in range(1, 7) if math.gcd(r, k) == 1
    ]
    for e1, e2 in product(edges, repeat=2):
        a = LocalData(e1.r, e1.s_bar, e1.s)
        b = LocalData(e2.r, e2.s_bar, e2.s)
        assert pair_globalisable(e1, e2)[0] == pair_satisfies_Ci_Cii(a, b), (e1, e2)


def test_separation_of_unramified_fibres() -> None:
    assert separates_fibres(FiberData.of([make_unramified(1, 2), make_unramified(1, 3), make_unramified(2, 5)]))
    assert not separates_fibres(FiberData.of([make_unramified(2, 2), make_unramified(2, 3)]))
    assert not separates_fibres(FiberData.of([make_unramified(1, 2), make_unramified(1, 2)]))
    assert separates_fibres(FiberData.of([make_unramified(4, 1)]))
    with pytest.raises(DomainError):
        separates_fibres(FiberData.of([LocalData.of_type(2, 1)]))


def test_fibre_verdicts_use_yes_or_unknown() -> None:
    exceptional = FiberData.of([LocalData.of_type(3, 2), LocalData.of_type(4, 3)], base="0")
    separated = FiberData.of([make_unramified(1, 2), make_unramified(2, 5)])

    verdict = fiber_globalisable(exceptional)
    assert verdict.verdict == "unknown"
    assert verdict.reasons() == ["points 0 (nu=2/3) and 1 (nu=3/4) satisfy neither C-i nor C-ii"]
    assert fiber_globalisable(separated).verdict == "yes"
    assert fiber_globalisable(separated).criterion == "separation of an unramified fibre"
    assert fiber_globalisable(FiberData.of([LocalData.of_type(5, 3)])).globalisable


def test_fibre_of_a_smooth_point_with_one_vanishing_value() -> None:
    # y takes distinct values b_i on the sheets; one of them vanishes
    fiber = FiberData.of(
        [
            LocalData(2, 3, 3, tau=Fraction(1)),
            LocalData(1, 1, tau=Fraction(5)),
            LocalData(3, 3, 4, tau=Fraction(3 * 7)),
        ]
    )
    verdict = fiber_globalisable(fiber)

    assert verdict.globalisable
    assert {p.rule for p in verdict.pairs} == {"C-i (m=1)"}


def test_bks_conditions_on_the_exceptional_pair() -> None:
    report = bks_predicates(FiberData.of([LocalData.of_type(3, 2), LocalData.of_type(4, 3)]))

    assert report.applicable
    assert report.c_b is True
    assert report.necessary_Cabc is True
    assert report.sufficient_chain is True


def test_bks_conditions_fail_and_flag_out_of_range_data() -> None:
    shared_floor = FiberData.of([LocalData.of_type(7, 3), LocalData.of_type(9, 4)])
    triple = FiberData.of([LocalData.of_type(5, 2), LocalData.of_type(7, 3), LocalData.of_type(9, 4)])
    pole = FiberData.of([LocalData.of_type(2, -1)])

    assert bks_predicates(shared_floor).c_b is False
    assert bks_predicates(triple).c_c is False
    assert not bks_predicates(pole).applicable
    assert bks_predicates(pole).necessary_Cabc is None
    assert bks_predicates(FiberData.of([LocalData.of_type(5, 3)])).necessary_Cabc is True


def test_rewritten_conditions_imply_the_necessary_ones() -> None:
    data = [d for d in build_admissible_data(8, 9) if d.s_bar > 0 and (d.r == 1 or d.s == d.s_bar)]
    for a, b in product(data, repeat=2):
        if pair_satisfies_Ci_Cii(a, b) and a.nu != b.nu:
            assert bks_predicates(FiberData.of([a, b])).necessary_Cabc, (a, b)


def test_family_report_flags_the_central_fibre() -> None:
    good = FamilySample(0, (FiberData.of([LocalData.of_type(5, 3), LocalData.of_type(5, -3)], base="0"),))
    bad = FamilySample(0, (FiberData.of([LocalData.of_type(7, 5)], base="0"),))
    regular = (FiberData.of([make_unramified(1, 1), make_unramified(1, 2)], base="1"),)

    assert family_admissibility_report([good]).admissible
    report = family_admissibility_report([FamilySample(1, good.branch_fibers, regular), bad])
    assert not report.admissible
    assert report.describe()["admissible"] == "unknown"
    assert report.samples[0].admissible
    assert not report.samples[1].locally_admissible
    assert "(lA2)" in report.samples[1].reasons[0]


def test_local_data_from_json() -> None:
    fibers = fibers_from_json(
        {
            "fibers": [
                {"base": "0", "points": [{"r": 3, "s_bar": 2}, {"r": 1, "s_bar": 1, "tau": "1/2"}]},
            ]
        }
    )

    assert fibers[0].base == "0"
    assert fibers[0].points[0].s == 2
    assert fibers[0].points[1].s == math.inf
    assert fibers[0].points[1].tau == Fraction(1, 2)
    with pytest.raises(ParseError):
        fibers_from_json({"fibers": []})
    with pytest.raises(ParseError):
        fibers_from_json([{"points": [{"r": 2, "s_bar": 4, "s": 4}]}])
    with pytest.raises(ParseError):
        fibers_from_json([{"points": [{"r": "two", "s_bar": 1}]}])
