from fractions import Fraction

import pytest
import sympy

from trlimits.algebra import T
from trlimits.algebra.rational import INFINITY
from trlimits.curve import SpectralCurve, local_parameters
from trlimits.errors import ConfigurationError, DomainError, NonAdmissibleError
from trlimits.recursion import (
    BasisLabel,
    ContourRecursion,
    Correlator,
    TopologicalRecursion,
    check_comb_identity,
    check_loop_equations,
    check_primitive_independence,
    check_projection_property,
    check_skip_rule,
    compare_modes,
    compositions,
    correlators_agree,
    global_tr_step,
    local_tr_step,
    pole_allowance,
    relative_difference,
    self_check,
    set_partitions,
    stable_types,
    variables,
)
from trlimits.series import W

w0, w1, w2 = variables(3)


def make_rs_curve(r: int, s: int) -> SpectralCurve:
    return SpectralCurve.from_sympy(W**r, W ** (s - r), name=f"({r},{s})")


def make_airy() -> SpectralCurve:
    return SpectralCurve.from_sympy(W**2, W, name="airy")


def make_seven_five(t_value: int = 1) -> SpectralCurve:
    t = sympy.Integer(t_value)
    return SpectralCurve.from_sympy(W * (W**2 - t**2) ** 3, 1 / (W**2 - t**2), name="seven-five")


def same(a: sympy.Expr, b: sympy.Expr) -> bool:
    return sympy.cancel(a - b) == 0


def agree_at_samples(a: sympy.Expr, b: sympy.Expr, symbols) -> bool:
    samples = [Fraction(1, 3), Fraction(2, 5), Fraction(-3, 7), Fraction(5, 11)]
    for shift in range(3):
        values = {s: sympy.Rational(samples[(i + shift) % 4]) for i, s in enumerate(symbols)}
        left = complex(a.subs(values).evalf(40))
        right = complex(b.subs(values).evalf(40))
        if abs(left - right) > 1e-20 * max(1.0, abs(right)):
            return False
    return True


def test_stable_types_are_ordered_by_euler_characteristic() -> None:
    assert stable_types(2) == [(0, 3), (1, 1), (0, 4), (1, 2)]
    assert stable_types(0) == []


def test_set_partitions_and_compositions() -> None:
    assert len(list(set_partitions([0, 1, 2]))) == 5
    assert len(list(set_partitions([0, 1, 2, 3]))) == 15
    assert [[0], [1]] in list(set_partitions([0, 1]))
    assert list(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
    assert list(compositions(1, 0)) == []


def test_three_one_curve_golden_values() -> None:
    """omega_11 = -dw/(9 w^2): the sign follows from omega_02 = dw0 dw1/(w0 - w1)^2 in the kernel.

    Some references print it with a plus sign; the Airy and Bessel values below use
    the same convention.
    """

    engine = TopologicalRecursion(make_rs_curve(3, 1))

    assert engine.correlator(0, 3).is_zero()
    assert same(engine.correlator(1, 1).render(), -1 / (9 * w0**2))


def test_airy_curve() -> None:
    engine = TopologicalRecursion(make_airy())
    omega03 = engine.correlator(0, 3)

    assert same(omega03.render(), -1 / (2 * w0**2 * w1**2 * w2**2))
    assert same(engine.correlator(1, 1).render(), -1 / (16 * w0**4))
    assert list(omega03.pole_orders().values()) == [2]


def test_bessel_curve() -> None:
    engine = TopologicalRecursion(SpectralCurve.from_sympy(W**2, 1 / W, name="bessel"))

    assert engine.correlator(0, 3).is_zero()
    assert same(engine.correlator(1, 1).render(), -1 / (16 * w0**2))


def test_correlators_are_symmetric_and_residue_free() -> None:
    engine = TopologicalRecursion(make_rs_curve(3, 2))
    for omega in engine.correlators(2).values():
        assert omega.is_symmetric()
        assert omega.is_residue_free()
        assert omega.certified
    assert [(report.g, report.n) for report in engine.reports] == stable_types(2)


def test_unstable_types_are_rejected() -> None:
    engine = TopologicalRecursion(make_airy())

    with pytest.raises(DomainError):
        engine.correlator(0, 2)
    with pytest.raises(DomainError):
        engine.correlator(1, 0)


def test_step_functions_match_the_engine() -> None:
    curve = make_airy()
    engine = TopologicalRecursion(curve)

    assert local_tr_step(curve, 0, 2).same_as(engine.correlator(0, 3))
    assert correlators_agree(global_tr_step(curve, 1, 0), engine.correlator(1, 1))


def test_describe_has_schema_and_rendering() -> None:
    payload = TopologicalRecursion(make_airy()).correlator(1, 1).describe()

    assert payload["schema"] == 1
    assert (payload["g"], payload["n"], payload["certified"], payload["symmetric"]) == (1, 1, True, True)
    assert payload["basis"] == ["C0:0:4"]
    assert payload["coeffs"] == [{"labels": [0], "value": "-1/16"}]
    assert payload["rendered"] == "-1/(16*w0**4)"


def test_projection_property_holds_and_detects_perturbations() -> None:
    engine = TopologicalRecursion(make_airy())
    omega = engine.correlator(1, 1)

    assert check_projection_property(engine, omega).holds
    extra = BasisLabel(0, Fraction(1), 2)
    perturbed = Correlator(1, 1, {**omega.coeffs, (extra,): Fraction(1)})
    report = check_projection_property(engine, perturbed)
    assert not report.holds
    assert [labels for labels, _, _ in report.mismatches] == [(extra,)]


def test_pole_allowance() -> None:
    origin = local_parameters(make_airy(), 0)

    assert pole_allowance(origin, 1) == 0
    assert pole_allowance(origin, 2) == 0
    # r = 3, s = 2: d(3) = 2 - floor(4 / 3)
    assert pole_allowance(local_parameters(make_rs_curve(3, 2), 0), 3) == 1
    assert pole_allowance(local_parameters(SpectralCurve.from_sympy(W, W), 1), 1) == 0


@pytest.mark.parametrize("g, n", [(1, 0), (0, 2), (1, 1)])
def test_loop_equations_at_the_airy_point(g: int, n: int) -> None:
    engine = TopologicalRecursion(make_airy())
    (origin,) = [p for p in engine.points if p.contributes]
    report = check_loop_equations(engine, g, n, origin)

    assert report.ok
    assert [entry.i for entry in report.entries] == [1, 2]


def test_loop_sums_run_over_the_whole_fibre() -> None:
    engine = TopologicalRecursion(make_airy())
    (origin,) = [p for p in engine.points if p.contributes]
    report = check_loop_equations(engine, 1, 0, origin)

    # E_1 = omega_11(z) + omega_11(-z) and E_2 = W_{1,2}(z, -z) both cancel
    assert [entry.observed for entry in report.entries] == [None, None]
    assert all(entry.congruent for entry in report.entries)


def test_loop_equations_at_an_unramified_probe() -> None:
    engine = TopologicalRecursion(make_rs_curve(3, 2))
    probe = local_parameters(engine.curve, Fraction(1))
    report = check_loop_equations(engine, 0, 2, probe)

    assert report.ok
    (entry,) = report.entries
    assert entry.allowed == 0


def test_loop_equations_of_the_three_two_curve() -> None:
    engine = TopologicalRecursion(make_rs_curve(3, 2))
    (origin,) = [p for p in engine.points if p.contributes]

    assert check_loop_equations(engine, 1, 0, origin).ok


def test_comb_identity() -> None:
    airy = TopologicalRecursion(make_airy())
    (origin,) = [p for p in airy.points if p.contributes]
    assert check_comb_identity(airy, 0, 2, origin)

    three_two = TopologicalRecursion(make_rs_curve(3, 2))
    (origin,) = [p for p in three_two.points if p.contributes]
    assert check_comb_identity(three_two, 1, 0, origin)


def test_primitive_choice_and_skip_rule() -> None:
    assert check_primitive_independence(make_airy(), 2, constant=Fraction(3, 2))
    assert check_skip_rule(make_rs_curve(3, 1), 1)


def test_self_check_of_the_three_two_curve() -> None:
    report = self_check(TopologicalRecursion(make_rs_curve(3, 2)), 2)

    assert report.ok, report.failures
    assert "omega_1,1:projection" in report.results


def test_non_admissible_curve_is_refused() -> None:
    with pytest.raises(NonAdmissibleError) as info:
        TopologicalRecursion(make_rs_curve(7, 5))
    assert info.value.clause == "lA2"


@pytest.mark.slow
def test_forced_run_on_the_seven_five_curve_is_asymmetric() -> None:
    engine = TopologicalRecursion(make_rs_curve(7, 5), force=True)
    omega = engine.correlator(0, 3)

    assert not engine.certified
    assert not omega.certified
    assert not omega.is_symmetric()


@pytest.mark.slow
def test_seven_five_deformation_at_t_one() -> None:
    engine = TopologicalRecursion(make_seven_five(1))
    a1 = w0**2 * w1**2 + w0**2 * w2**2 + w1**2 * w2**2 + 4 * w0 * w1 * w2 * (w0 + w1 + w2)
    a2 = w0**2 + w1**2 + w2**2 + 4 * (w0 * w1 + w0 * w2 + w1 * w2)
    a3 = (
        2401 * w0**12
        - 6174 * w0**10
        - 5537 * w0**8
        + 4284 * w0**6
        + 2255 * w0**4
        - 1790 * w0**2
        - 47
    )
    omega03 = 343 * (343 * w0**2 * w1**2 * w2**2 + 49 * a1 + 7 * a2 + 1) / (
        2 * ((7 * w0**2 - 1) * (7 * w1**2 - 1) * (7 * w2**2 - 1)) ** 2
    )
    omega11 = a3 / (16 * (w0**2 - 1) ** 3 * (7 * w0**2 - 1) ** 4)

    assert agree_at_samples(engine.correlator(0, 3).render(), omega03, (w0, w1, w2))
    assert agree_at_samples(engine.correlator(1, 1).render(), omega11, (w0,))


@pytest.mark.slow
def test_fibre_recursion_agrees_with_the_local_one_on_seven_five() -> None:
    curve = make_seven_five(1)
    local = TopologicalRecursion(curve)
    fibre = TopologicalRecursion(curve, mode="fiber")

    for g, n in stable_types(1):
        assert correlators_agree(local.correlator(g, n), fibre.correlator(g, n))


@pytest.mark.slow
def test_point_and_fibre_groupings_on_a_mixed_fibre() -> None:
    # (3,2) at w = 0 and (4,3) at w = 1, both over x = 0
    curve = SpectralCurve.from_sympy(W**3 * (W - 1) ** 4, 1 / (W * (W - 1)), name="three-two-four-three")
    types = sorted((p.r, p.s) for p in TopologicalRecursion(curve).points if p.x_value == 0)
    comparison = compare_modes(curve, 1)

    assert types == [(3, 2), (4, 3)]
    assert set(comparison.agreement) == {(0, 3), (1, 1)}
    assert comparison.describe()["modes"] == ["point", "fiber"]


def test_numeric_backend_matches_exact_values() -> None:
    curve = make_rs_curve(3, 1)
    exact = TopologicalRecursion(curve).correlator(1, 1)
    numeric = ContourRecursion(curve)
    omega = numeric.correlator(1, 1)

    assert not omega.certified
    assert relative_difference(exact, omega) < 1e-10
    assert numeric.errors[(1, 1)] < 1e-10


def test_numeric_backend_on_airy() -> None:
    curve = make_airy()
    exact = TopologicalRecursion(curve).correlators(1)
    numeric = ContourRecursion(curve, nodes=32).correlators(1)

    for key in exact:
        assert relative_difference(exact[key], numeric[key]) < 1e-10


def test_overlapping_discs_are_a_configuration_error() -> None:
    curve = SpectralCurve.from_sympy(W**3 - 3 * W, 1 / W)

    with pytest.raises(ConfigurationError):
        ContourRecursion(curve, radii={Fraction(2): 3, Fraction(-2): 3})
    with pytest.raises(ConfigurationError):
        ContourRecursion(curve, radii={Fraction(2): -1})


def test_numeric_backend_needs_a_specialised_curve() -> None:
    curve = SpectralCurve.from_sympy(W**3 - 3 * T**2 * W, 1 / W**2)

    with pytest.raises(DomainError):
        ContourRecursion(curve)


def test_infinity_label_round_trip() -> None:
    label = BasisLabel(0, INFINITY, 3)

    assert label.at_infinity
    assert label.text() == "C0:oo:3"
    assert same(label.to_sympy(w0), w0)
