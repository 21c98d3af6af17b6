from fractions import Fraction

import pytest

from trlimits.algebra import ExtFraction, farey_neighbours, farey_sequence
from trlimits.errors import DomainError


def fractions(*values: str) -> list[ExtFraction]:
    return [ExtFraction.of(Fraction(v)) for v in values]


def test_farey_sequence_of_order_five_up_to_seven_fifths() -> None:
    expected = fractions(
        "0", "1/5", "1/4", "1/3", "2/5", "1/2", "3/5", "2/3", "3/4", "4/5",
        "1", "6/5", "5/4", "4/3", "7/5",
    )

    assert farey_sequence(5, ExtFraction(7, 5)) == expected


def test_trivial_and_small_farey_sequences() -> None:
    assert farey_sequence(1, 3) == fractions("0", "1", "2", "3")
    assert farey_sequence(2, 1) == fractions("0", "1/2", "1")


@pytest.mark.parametrize("order", range(1, 31))
def test_mediant_and_bezout_identities(order: int) -> None:
    sequence = farey_sequence(order, 2)
    for left, right in zip(sequence, sequence[1:]):
        assert right.num * left.den - left.num * right.den == 1
    for left, middle, right in zip(sequence, sequence[1:], sequence[2:]):
        assert middle == ExtFraction(left.num + right.num, left.den + right.den)


def test_farey_neighbours_examples() -> None:
    assert farey_neighbours(ExtFraction(2, 7), 7)[0] == ExtFraction(1, 4)
    assert farey_neighbours(ExtFraction(1, 3), 5) == (ExtFraction(1, 4), ExtFraction(2, 5))
    for p in range(1, 5):
        assert farey_neighbours(p, 1) == (ExtFraction(p - 1), ExtFraction.infinity())


def test_farey_neighbours_rejects_fractions_outside_the_sequence() -> None:
    with pytest.raises(DomainError):
        farey_neighbours(ExtFraction(1, 7), 5)
    with pytest.raises(DomainError):
        farey_neighbours(ExtFraction.infinity(), 3)


def test_infinity_orders_above_everything() -> None:
    infinity = ExtFraction.infinity()

    assert ExtFraction(10**6) < infinity
    assert str(infinity) == "oo"
    assert ExtFraction(4, -6) == ExtFraction(-2, 3)
