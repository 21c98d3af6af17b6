import math

import pytest
import sympy

from trlimits.algebra import T, format_scalar
from trlimits.algebra.rational import INFINITY
from trlimits.curve import (
    SpectralCurve,
    build_chart,
    curve_from_polynomial,
    curve_from_spec,
    find_ramification,
    is_locally_admissible,
    local_parameters,
    width_one_functional,
)
from trlimits.curve.construction import _completion
from trlimits.errors import (
    DomainError,
    InvalidCurveError,
    ParseError,
    TransalgebraicCurveError,
    UnsupportedGenusError,
)
from trlimits.globalization import fiber_from_curve, fiber_globalisable
from trlimits.series import W

x, y = sympy.symbols("x y")


def make_rs_curve(r: int, s: int) -> SpectralCurve:
    return SpectralCurve.from_sympy(W**r, W ** (s - r), name=f"({r},{s})")


def make_seven_five(t_value=None) -> SpectralCurve:
    t = T if t_value is None else sympy.Rational(t_value)
    return SpectralCurve.from_sympy(W * (W**2 - t**2) ** 3, 1 / (W**2 - t**2), name="seven-five")


def locations(points) -> list[tuple[str, int]]:
    return sorted((p.describe()["location"], p.r) for p in points)


def same(a: sympy.Expr, b: sympy.Expr) -> bool:
    return sympy.cancel(a - b) == 0


def test_monomial_curve_ramifies_at_zero_and_infinity() -> None:
    assert locations(find_ramification(make_rs_curve(5, 3))) == [("0", 5), ("oo", 5)]


def test_ramification_of_the_parametric_cubic() -> None:
    curve = SpectralCurve.from_sympy(W**3 - 3 * T**2 * W, 1 / W**2)

    assert locations(find_ramification(curve)) == [("-t", 2), ("oo", 3), ("t", 2)]


def test_mobius_coordinate_has_no_ramification() -> None:
    assert find_ramification(SpectralCurve.from_sympy(W, W + 1)) == []


@pytest.mark.parametrize("r, s", [(2, 1), (3, 1), (3, 2), (5, 3), (4, 3), (2, 3)])
def test_local_parameters_of_rs_curves(r: int, s: int) -> None:
    curve = make_rs_curve(r, s)
    origin = local_parameters(curve, 0)
    infinity = local_parameters(curve, INFINITY)

    assert (origin.r, origin.s, origin.s_bar, format_scalar(origin.tau)) == (r, s, s, str(r))
    assert (infinity.r, infinity.s, infinity.s_bar, format_scalar(infinity.tau)) == (r, -s, -s, str(-r))
    assert origin.contributes
    assert not infinity.contributes


@pytest.mark.parametrize("r", [2, 3])
def test_smooth_affine_ramification(r: int) -> None:
    point = local_parameters(SpectralCurve.from_sympy(W**r, 2 + W), 0)

    assert (point.r, point.s, point.s_bar) == (r, r + 1, r)
    assert is_locally_admissible(point)


def test_unramified_point_has_no_finite_s() -> None:
    point = local_parameters(SpectralCurve.from_sympy(W, W), 1)

    assert point.r == 1
    assert point.s == math.inf
    assert not point.contributes


def test_late_non_invariant_term_is_found() -> None:
    point = local_parameters(SpectralCurve.from_sympy(W**2, 1 + W**31), 0)

    assert (point.r, point.s_bar, point.s) == (2, 2, 33)


def test_y_even_in_the_chart_has_infinite_s() -> None:
    point = local_parameters(SpectralCurve.from_sympy(W**2, W**2 + W**4), 0)

    assert (point.r, point.s_bar) == (2, 4)
    assert point.s == math.inf


@pytest.mark.parametrize("r", range(2, 13))
def test_origin_admissibility_is_the_congruence(r: int) -> None:
    for s in range(1, r + 2):
        if math.gcd(r, s) != 1:
            continue
        verdict = is_locally_admissible(local_parameters(make_rs_curve(r, s), 0))
        assert bool(verdict) == (s == 1 or r % s in (1, s - 1)), (r, s)


def test_seven_five_point_violates_the_congruence() -> None:
    assert is_locally_admissible(local_parameters(make_rs_curve(5, 3), 0))
    verdict = is_locally_admissible(local_parameters(make_rs_curve(7, 5), 0))
    assert not verdict
    assert verdict.clause == "lA2"


def test_constant_x_or_vanishing_y_is_not_a_curve() -> None:
    with pytest.raises(InvalidCurveError):
        SpectralCurve.from_sympy(sympy.Integer(3), W)
    with pytest.raises(InvalidCurveError):
        SpectralCurve.from_sympy(W**2, sympy.Integer(0))


@pytest.mark.parametrize("location", [1, INFINITY])
def test_standard_chart_reproduces_x(location) -> None:
    curve = SpectralCurve.from_sympy(W**3 - 3 * W, 1 / W)
    chart = build_chart(curve, 0, location, terms=10)
    pulled_back = curve.x.evaluate_series(chart.w_series())

    assert pulled_back.agrees_with(chart.x_series())


def test_seven_five_fibre_over_zero_is_not_certified() -> None:
    fiber = fiber_from_curve(make_seven_five(1), 0)

    assert sorted((p.r, p.s_bar) for p in fiber) == [(1, 1), (3, 2), (3, 2)]
    assert fiber_globalisable(fiber).verdict == "unknown"


def test_width_one_functional() -> None:
    assert width_one_functional([(0, 0), (0, 1), (2, 7)]) == (-3, 1)
    assert width_one_functional([(0, 0), (2, 5)]) == (-5, 2)
    assert width_one_functional([(0, 0), (2, 0), (0, 2)]) is None


@pytest.mark.parametrize("a, b", [(-3, 1), (-5, 2), (2, 7), (-1, 0)])
def test_unimodular_completion(a: int, b: int) -> None:
    c, d = _completion(a, b)

    assert a * d - b * c == 1


def test_monomial_polynomial_gives_the_rs_parametrization() -> None:
    result = curve_from_polynomial(x**2 * y**5 - 1)
    (pair,) = result.parametrizations

    assert same(pair[0], W**5)
    assert same(pair[1], W ** (-2))
    assert result.require().name == "curve"


@pytest.mark.parametrize("t_value", [None, 2])
def test_seven_five_deformation_is_parametrized(t_value) -> None:
    result = curve_from_polynomial(x**2 * y**7 - T**2 * y - 1, t=t_value)
    t = T if t_value is None else t_value
    (pair,) = result.parametrizations

    assert same(pair[0], W * (W**2 - t**2) ** 3)
    assert same(pair[1], 1 / (W**2 - t**2))
    assert result.curve is not None
    assert result.curve.is_parametric() == (t_value is None)


def test_f_plus_shape_is_parametrized() -> None:
    polynomial = -(1 + y) + x * y**2
    result = curve_from_polynomial(polynomial)
    (pair,) = result.parametrizations

    assert same(polynomial.subs({x: pair[0], y: pair[1]}), 0)
    num, den = sympy.fraction(sympy.cancel(pair[0]))
    assert max(sympy.degree(num, W), sympy.degree(den, W)) == 2
    assert [p.r for p in find_ramification(result.require())] == [2, 2]


def test_reducible_polynomial_has_one_component_per_factor() -> None:
    result = curve_from_polynomial(sympy.expand((x * y - 1) * (x * y**2 - 1)))

    assert len(result.factors) == 2
    assert len(result.require().components) == 2


def test_polynomials_outside_the_domain() -> None:
    with pytest.raises(DomainError):
        curve_from_polynomial((x * y - 1) ** 2)
    with pytest.raises(DomainError):
        curve_from_polynomial((x - 1) * (x * y - 1))
    with pytest.raises(DomainError):
        curve_from_polynomial(y * (x * y - 1))


def test_positive_genus_is_unsupported() -> None:
    with pytest.raises(UnsupportedGenusError) as info:
        curve_from_polynomial(y**2 - x**3 - x - 1)
    assert info.value.genus == 1


def test_other_genus_zero_shapes_only_get_a_diagnostic() -> None:
    result = curve_from_polynomial(x**2 + y**2 - 1)

    assert result.curve is None
    assert result.notes
    assert set(result.polygon.vertices) == {(0, 0), (2, 0), (0, 2)}
    with pytest.raises(InvalidCurveError):
        result.require()


def test_curve_spec_with_parametrization_and_t() -> None:
    spec = '{"parametrization": {"x": "w^3 - 3*t^2*w", "y": "1/w^2"}, "t": "1/2"}'
    curve = curve_from_spec(spec).require()

    assert not curve.is_parametric()
    assert same(curve.to_sympy()[0][0], W**3 - sympy.Rational(3, 4) * W)
    assert curve_from_spec(spec, t=1).t == 1


def test_curve_spec_drops_horizontal_components() -> None:
    curve = curve_from_spec(
        {"components": [{"x": "w^2", "y": "w"}, {"x": "w", "y": "oo"}], "name": "two"}
    ).require()

    assert len(curve.components) == 1
    assert curve.dropped == ("C1",)
    assert curve.name == "two"


def test_curve_spec_with_polynomial() -> None:
    loaded = curve_from_spec({"polynomial": "x^2*y^7 - t^2*y - 1", "t": 1})

    assert loaded.construction is not None
    assert loaded.require().name == "curve"


def test_curve_spec_errors() -> None:
    with pytest.raises(ParseError) as info:
        curve_from_spec('{"parametrization": ')
    assert info.value.line == 1
    with pytest.raises(ParseError):
        curve_from_spec({"parametrization": {"x": "w"}})
    with pytest.raises(ParseError):
        curve_from_spec({"curve": "w"})
    with pytest.raises(ParseError):
        curve_from_spec({"parametrization": {"x": "w + z", "y": "w"}})
    with pytest.raises(TransalgebraicCurveError):
        curve_from_spec({"parametrization": {"x": "exp(w)", "y": "w"}})
