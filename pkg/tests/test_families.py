from fractions import Fraction

import pytest
import sympy

from trlimits.algebra import T, ParamRational
from trlimits.errors import DomainError, FiberInvalidError, ParseError, TransalgebraicCurveError
from trlimits.families import (
    FamilyRecursion,
    FamilySpec,
    V,
    build_rs_family,
    chebyshev_family,
    check_specialization,
    commutation_table,
    congruence_generated,
    correlators_over_t,
    expected_profile,
    family_admissibility,
    family_from_spec,
    generic_rs_family,
    geometric_condition,
    limit_at_center,
    norbury_family,
    phi_b_on_type,
    phi_orbit,
    ramification_profile,
    reduce_type,
    seven_five_family,
    singular_family,
    t_valuation,
    type_local_data,
    well_defined_type,
)
from trlimits.recursion import ContourRecursion, TopologicalRecursion, relative_difference, variables
from trlimits.series import W

w0, w1, w2 = variables(3)


def same(a: sympy.Expr, b: sympy.Expr) -> bool:
    return sympy.cancel(a - b) == 0


def fibre_x(family: FamilySpec, t_value) -> sympy.Expr:
    return family.fibre(t_value).to_sympy()[0][0]


# -- construction ---------------------------------------------------------


def test_undeformed_data_gives_the_rs_curve() -> None:
    family = build_rs_family(5, 2, 1, 1)

    assert family.case == "F+"
    assert same(family.x, W**5)
    assert same(family.y, W**-3)


def test_r_plus_one_family_with_w_to_the_r() -> None:
    family = build_rs_family(3, 4, V**3, W**3)

    assert same(family.x, W**-3)
    assert same(family.y, 1 / W)
    assert not family.depends_on_t()


def test_seven_five_slice() -> None:
    family = seven_five_family()

    assert family.case == "F-"
    assert same(family.x, W * (W**2 - T**2) ** 3)
    assert same(family.y, 1 / (W**2 - T**2))


def test_default_slices_are_homogeneous() -> None:
    seven_five = seven_five_family().homogeneity
    r_plus_one = build_rs_family(3, 4).homogeneity

    assert (seven_five.t_weight, seven_five.x_weight, seven_five.y_weight) == (1, 7, -2)
    assert (r_plus_one.t_weight, r_plus_one.x_weight, r_plus_one.y_weight) == (-1, -3, -1)
    assert r_plus_one.scale() == ParamRational.variable().inverse()
    assert chebyshev_family(3, square=False).homogeneity is None


@pytest.mark.parametrize(
    "r, s, L, R",
    [
        (4, 2, None, None),
        (3, 3, None, None),
        (5, 2, 1 + V + V**2 + V**3, 1),
        (5, 2, V, 1),
    ],
)
def test_invalid_deformation_data_is_a_domain_error(r, s, L, R) -> None:
    with pytest.raises(DomainError):
        build_rs_family(r, s, L, R)


def test_chebyshev_members() -> None:
    square = chebyshev_family(3)
    plain = chebyshev_family(3, square=False)

    assert same(square.x, W**3 - 3 * T**2 * W)
    assert same(fibre_x(plain, Fraction(1, 4)), W**3 - sympy.Rational(3, 4) * W)
    with pytest.raises(DomainError):
        chebyshev_family(1)


def test_bad_set_of_the_singular_family() -> None:
    family = singular_family()

    assert Fraction(0) in family.bad_set.values
    assert family.bad_set.contains(0)
    assert not family.bad_set.contains(1)
    assert not family.bad_set.contains(Fraction(1, 3))
    with pytest.raises(FiberInvalidError) as info:
        family.fibre(0)
    assert info.value.t == 0


def test_central_curve_keeps_the_bad_fibre() -> None:
    central = singular_family().central_curve()

    assert same(central.to_sympy()[0][0], W**3)


def test_norbury_family() -> None:
    family = norbury_family(3)
    central = family.central_curve()

    assert same(family.x, W**2 + 2 * T**3 / W)
    assert central.dropped == ("C1",)
    assert len(central.components) == 1
    assert same(central.to_sympy()[0][0], W**2)
    assert family.describe()["reparametrization"] == "u = 2 t^3"
    with pytest.raises(DomainError):
        norbury_family(2)


def test_transalgebraic_families_are_rejected() -> None:
    with pytest.raises(TransalgebraicCurveError):
        FamilySpec(sympy.log(W), W)
    with pytest.raises(TransalgebraicCurveError):
        family_from_spec({"family": "custom", "x": "exp(w)", "y": "w"})


def test_family_specs() -> None:
    from_json = family_from_spec('{"family": "rs", "r": 7, "s": 5, "L": "1 - t^2*v^2", "R": "1"}')
    custom = family_from_spec({"family": "custom", "x": "w^3 - 3*t^2*w", "y": "1/w^2", "name": "mine"})

    assert same(from_json.x, seven_five_family().x)
    assert custom.name == "mine"
    assert same(custom.x, singular_family().x)
    assert family_from_spec({"family": "norbury", "k": 4}).case == "norbury"
    with pytest.raises(ParseError):
        family_from_spec({"family": "hurwitz"})
    with pytest.raises(ParseError):
        family_from_spec('{"family": ')
    with pytest.raises(ParseError):
        family_from_spec({"family": "rs", "r": "7", "s": 5})


# -- splitting profiles -----------------------------------------------------


def test_profile_of_the_seven_five_member() -> None:
    profile = ramification_profile(seven_five_family(), 1)

    assert profile.text() == "(3,2)_0^2 ⊠ (2,3)^2"
    assert profile.locally_admissible()
    assert profile.total() == 4


def test_profile_of_a_norbury_member() -> None:
    profile = ramification_profile(norbury_family(3), 1)

    assert profile.text() == "(2,3)^3"
    assert profile.shared_branch_values == 0


def test_profile_refuses_bad_parameters() -> None:
    with pytest.raises(FiberInvalidError):
        ramification_profile(singular_family(), 0)


def test_generic_profile_of_five_two() -> None:
    profile = ramification_profile(generic_rs_family(5, 2))

    assert profile.text() == "(2,1)_0^2 ⊠ (2,3)^2 ⊠ [(2,3)^2]"
    assert profile.counts() == expected_profile(5, 2)


@pytest.mark.slow
@pytest.mark.parametrize("r, s", [(2, 1), (2, 3), (3, 1), (3, 2), (3, 4), (4, 3), (5, 3), (5, 4), (7, 3), (7, 4)])
def test_generic_profiles_match_the_splitting_table(r: int, s: int) -> None:
    profile = ramification_profile(generic_rs_family(r, s))

    assert profile.counts() == expected_profile(r, s)
    assert profile.locally_admissible()


def test_expected_profile_table() -> None:
    assert expected_profile(4, 3) == {(False, False, 2, 3): 3, (False, True, 2, 3): 3}
    assert expected_profile(7, 2) == {
        (True, False, 3, 1): 2,
        (False, False, 2, 3): 2,
        (False, True, 2, 3): 2,
    }
    assert expected_profile(11, 4)[(True, False, 2, 1)] == 1
    assert expected_profile(7, 5) is None


# -- correlators over t and limits -------------------------------------------


def test_t_valuation() -> None:
    assert t_valuation(1 / (T**2 * w0)) == (-2, 1 / w0)
    order, lead = t_valuation((T + w0) / (2 * T + 1))
    assert order == 0
    assert same(lead, w0)
    assert t_valuation(T**3 / (T + w0))[0] == 3


@pytest.mark.slow
def test_singular_family_correlators_over_t() -> None:
    omega = correlators_over_t(singular_family(), 0, 3)
    expected = T**2 / 12 * sum(
        1 / ((w0 + eps * T) ** 2 * (w1 + eps * T) ** 2 * (w2 + eps * T) ** 2) for eps in (1, -1)
    )

    assert omega.method == "rescaled"
    assert same(omega.render(), expected)


@pytest.mark.slow
def test_rescaled_and_direct_computations_agree() -> None:
    family = singular_family()
    rescaled = FamilyRecursion(family, "rescaled").correlator(1, 1)
    direct = FamilyRecursion(family, "direct").correlator(1, 1)

    assert direct.method == "direct"
    assert same(rescaled.render(), direct.render())


@pytest.mark.slow
def test_specializing_commutes_with_the_recursion() -> None:
    recursion = FamilyRecursion(singular_family())

    for g, n in [(0, 3), (1, 1), (0, 4)]:
        outcome = check_specialization(recursion, g, n)
        assert outcome == {"1": True, "2": True, "1/3": True}


def test_sampled_mode_keeps_one_correlator_per_member() -> None:
    omega = correlators_over_t(norbury_family(3), 0, 3, method="sampled")

    assert omega.exact is None
    assert sorted(omega.samples) == ["1", "1/3", "2"]
    assert limit_at_center(norbury_family(3), 0, 3, method="sampled").verdict() == "undetermined"


@pytest.mark.slow
def test_seven_five_family_diverges() -> None:
    recursion = FamilyRecursion(seven_five_family())
    omega03 = recursion.limit(0, 3)
    omega11 = recursion.limit(1, 1)

    assert omega03.divergent and omega03.valuation == -2
    assert omega11.divergent and omega11.valuation == -4
    assert not omega03.matches_central
    assert not omega03.central_certified


@pytest.mark.slow
def test_singular_family_converges_to_the_wrong_correlators() -> None:
    recursion = FamilyRecursion(singular_family())
    omega03 = recursion.limit(0, 3)
    omega11 = recursion.limit(1, 1)

    assert omega03.exists and omega03.matches_central
    assert same(omega03.limit, 0)
    assert omega11.exists and not omega11.matches_central
    assert same(omega11.limit, -sympy.Rational(7, 144) / w0**2)
    assert same(omega11.central.render(), -1 / (9 * w0**2))


@pytest.mark.slow
def test_norbury_limit_is_the_bessel_correlator() -> None:
    report = limit_at_center(norbury_family(3), 1, 1)

    assert report.exists and report.matches_central
    assert same(report.limit, -1 / (16 * w0**2))


@pytest.mark.slow
def test_three_two_family_commutes_with_the_limit() -> None:
    recursion = FamilyRecursion(build_rs_family(3, 2))

    for g, n in [(0, 3), (1, 1)]:
        report = recursion.limit(g, n)
        assert report.matches_central, report.describe()


@pytest.mark.slow
def test_dichotomy_for_small_r() -> None:
    rows = commutation_table(3)

    assert [(row.r, row.s) for row in rows] == [(2, 1), (2, 3), (3, 1), (3, 2), (3, 4)]
    assert all(row.congruent and row.matches for row in rows)


def test_family_admissibility_skips_the_bad_set() -> None:
    report = family_admissibility(singular_family(), samples=(0, 1, 2))

    assert [sample.sample.t for sample in report.samples] == [1, 2]
    assert report.describe()["admissible"] in ("yes", "unknown")


def test_chebyshev_member_against_the_numeric_backend() -> None:
    curve = chebyshev_family(3, square=False).fibre(Fraction(1, 4))
    exact = TopologicalRecursion(curve).correlator(1, 1)
    numeric = ContourRecursion(curve).correlator(1, 1)

    assert relative_difference(exact, numeric) < 1e-10


# -- monomial symplectic transformations -----------------------------------


def test_phi_b_on_types() -> None:
    assert phi_b_on_type(7, 5, 1) == (2, 5)
    assert phi_b_on_type(7, 5, 0) == (7, 5)
    assert phi_b_on_type(phi_b_on_type(7, 3, 1)[0], 3, 2) == phi_b_on_type(7, 3, 3)
    assert reduce_type(7, 5) == (2, 5, 1)
    assert (2, 5) in phi_orbit(7, 5, 2)
    assert not geometric_condition(2, 5)
    assert type_local_data(-3, 2) == (3, -2)
    with pytest.raises(DomainError):
        phi_b_on_type(3, 6, 1)


@pytest.mark.parametrize("r", range(2, 13))
def test_orbits_stay_geometric_exactly_under_the_congruence(r: int) -> None:
    for s in range(1, r + 2):
        if s == r or sympy.gcd(r, s) != 1:
            continue
        assert congruence_generated(r, s) == (r % s in (1 % s, (s - 1) % s)), (r, s)
        assert well_defined_type(r, s) == congruence_generated(r, s), (r, s)
