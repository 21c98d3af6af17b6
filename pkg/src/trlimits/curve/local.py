"""Ramification points, standard charts and the local parameters (r, s, s_bar, tau)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from trlimits.algebra import ExtFraction, principal_root
from trlimits.algebra.rational import INFINITY, divide, is_infinity
from trlimits.errors import DomainError, FieldExtensionRequiredError, InvalidCurveError
from trlimits.series import LaurentSeries

from .model import SpectralCurve


@dataclass(frozen=True, slots=True)
class RamPoint:
    """A point of the curve with its ramification order and, once filled, local data.

    ``tau`` is the leading coefficient in the standard chart ``x = x(p) + zeta^r``
    (``None`` when that chart needs a root outside the field); ``tau_scaled`` is the
    same coefficient in the scaled chart ``x = x(p) + scale * zeta^r`` actually used,
    and ``tau_power`` is ``(tau / r) ** r'`` with ``r' = r / gcd(r, s_bar)``, which
    does not depend on any root choice.
    """

    component: int
    location: Any
    r: int
    x_value: Any
    s_bar: int | None = None
    s: int | float | None = None
    tau: Any = None
    tau_scaled: Any = None
    tau_power: Any = None
    scale: Any = None
    nu: ExtFraction | None = None
    contributes: bool | None = None

    @property
    def filled(self) -> bool:
        return self.s_bar is not None

    @property
    def place(self) -> tuple[int, Any]:
        return (self.component, self.location)

    @property
    def is_pole(self) -> bool:
        return is_infinity(self.x_value)

    @property
    def r_prime(self) -> int:
        if self.s_bar is None:
            raise DomainError("local data not filled")
        return self.r // math.gcd(self.r, self.s_bar)

    def local_type(self) -> tuple[int, int | float]:
        """``(r, s)``, the type used throughout the admissibility tables."""

        if self.s is None:
            raise DomainError("local data not filled")
        return (self.r, self.s)

    def describe(self) -> dict[str, Any]:
        from trlimits.algebra.text import format_scalar

        def text(value: Any) -> Any:
            if value is None:
                return None
            if is_infinity(value):
                return "oo"
            return format_scalar(value)

        return {
            "component": self.component,
            "location": text(self.location),
            "x_value": text(self.x_value),
            "r": self.r,
            "s": None if self.s is None else ("oo" if self.s == math.inf else self.s),
            "s_bar": self.s_bar,
            "tau": text(self.tau),
            "tau_power": text(self.tau_power),
            "nu": None if self.nu is None else str(self.nu),
            "contributes": self.contributes,
        }


@dataclass(frozen=True, slots=True)
class StandardChart:
    """Scaled standard coordinate at a point: ``x = x(p) + scale * zeta^(+-r)``.

    ``u_of_zeta`` expresses the local coordinate ``u = w - a`` (``u = 1/w`` when
    ``a`` is infinity) as a series in ``zeta`` with leading term ``zeta``.
    ``theta`` is the deck root of unity ``exp(2 pi i / r)`` or ``None`` when it is
    not in the curve's field.
    """

    component: int
    location: Any
    r: int
    x_value: Any
    scale: Any
    u_of_zeta: LaurentSeries
    theta: Any

    @property
    def pole(self) -> bool:
        return is_infinity(self.x_value)

    @property
    def exponent(self) -> int:
        return -self.r if self.pole else self.r

    def w_series(self) -> LaurentSeries:
        """The global coordinate ``w`` as a Laurent series in ``zeta``."""

        if is_infinity(self.location):
            return self.u_of_zeta.inverse()
        return self.u_of_zeta + LaurentSeries.constant(self.location)

    def x_series(self) -> LaurentSeries:
        """``x`` in the chart; exact by construction."""

        shift = LaurentSeries.monomial(self.exponent, self.scale)
        if self.pole:
            return shift
        return shift + LaurentSeries.constant(self.x_value)


def ramification_order(curve: SpectralCurve, component: int, location: Any) -> tuple[int, Any]:
    """``(r, x(p))`` at a point: the order of ``x - x(p)`` (or of the pole of ``x``)."""

    x = curve.components[component].x
    value = x(location)
    if is_infinity(value):
        return -x.order_at(location), INFINITY
    return (x - value).order_at(location), value


def build_chart(
    curve: SpectralCurve, component: int, location: Any, *, terms: int = 8
) -> StandardChart:
    """Standard chart at ``(component, location)`` known to ``terms`` relative orders."""

    comp = curve.components[component]
    r, q = ramification_order(curve, component, location)
    if r < 1:
        raise InvalidCurveError(f"x has no finite order at {location!r}")
    if is_infinity(q):
        local = comp.x.expand_at(location, -r + terms - 1)
        h = local.shift(r)
    else:
        local = (comp.x - q).expand_at(location, r + terms - 1)
        h = local.shift(-r)
    scale = h.leading()
    normalised = h.scale(divide(1, scale)).rth_root(r, root=1, terms=terms)
    if is_infinity(q):
        normalised = normalised.inverse(terms=terms)
    zeta_of_u = normalised.shift(1)
    u_of_zeta = zeta_of_u.reverse(terms=terms)
    theta: Any
    try:
        theta = curve.field.zeta(r)
    except FieldExtensionRequiredError:
        theta = None
    return StandardChart(component, location, r, q, scale, u_of_zeta, theta)


def omega01_series(
    curve: SpectralCurve, chart: StandardChart, *, terms: int
) -> LaurentSeries:
    """``T(zeta)`` with ``omega_{0,1} = T(zeta) dzeta / zeta`` in the chart."""

    y = curve.components[chart.component].y
    order = y.order_at(chart.location)
    y_local = y.expand_at(chart.location, order + terms - 1)
    y_zeta = y_local.compose(chart.u_of_zeta)
    factor = chart.exponent * chart.scale
    return y_zeta * LaurentSeries.monomial(chart.exponent, factor)


def _power(value: Any, exponent: int) -> Any:
    if exponent >= 0:
        return value**exponent
    return divide(1, value ** (-exponent))


def _first_non_invariant(series: LaurentSeries, r: int, start: int, stop: int) -> int | None:
    for exponent in range(start, stop):
        if exponent % r and series.coefficient(exponent) != 0:
            return exponent
    return None


def _non_invariant_bound(curve: SpectralCurve, component: int, r: int) -> int:
    """Largest exponent at which a term of ``y dx`` off the ``zeta**r`` lattice can first appear.

    ``y(zeta) - y(theta zeta)`` vanishes to order at most the intersection number
    ``2 deg(x) deg(y)`` of ``x(w) = x(v)`` and ``y(w) = y(v)`` off the diagonal;
    ``dx`` adds ``r``. Past it the point has ``s`` infinite.
    """

    comp = curve.components[component]
    return 2 * comp.x.degree * comp.y.degree + r


def local_parameters(
    curve: SpectralCurve, point: RamPoint | Any, *, component: int = 0
) -> RamPoint:
    """Fill ``(r, s_bar, s, tau, nu)`` from the expansion of ``y dx`` at the point."""

    if isinstance(point, RamPoint):
        component, location = point.component, point.location
    else:
        location = point
    r, q = ramification_order(curve, component, location)
    window = 4 * r + 9
    chart = build_chart(curve, component, location, terms=window)
    series = omega01_series(curve, chart, terms=window)
    if series.is_exact_zero():
        raise InvalidCurveError(f"omega_0,1 vanishes identically near {location!r}")
    s_bar = int(series.valuation())
    tau_scaled = series.leading()
    s: int | float = math.inf
    if r > 1:
        limit = _non_invariant_bound(curve, component, r)
        while True:
            found = _first_non_invariant(series, r, s_bar, min(s_bar + window, limit + 1))
            if found is not None:
                s = found
                break
            if s_bar + window > limit:
                break
            window *= 2
            chart = build_chart(curve, component, location, terms=window)
            series = omega01_series(curve, chart, terms=window)
    sign = 1 if chart.pole else -1
    g = math.gcd(r, s_bar)
    r_prime = r // g
    tau_power = _power(divide(tau_scaled, r), r_prime) * _power(chart.scale, sign * s_bar // g)
    try:
        tau = tau_scaled * principal_root(_power(chart.scale, sign * s_bar), r)
    except FieldExtensionRequiredError:
        tau = None
    return RamPoint(
        component=component,
        location=location,
        r=r,
        x_value=q,
        s_bar=s_bar,
        s=s,
        tau=tau,
        tau_scaled=tau_scaled,
        tau_power=tau_power,
        scale=chart.scale,
        nu=ExtFraction(s_bar, r),
        contributes=r >= 2 and s_bar >= 0,
    )


def with_local_data(curve: SpectralCurve, points: list[RamPoint]) -> list[RamPoint]:
    return [p if p.filled else local_parameters(curve, p) for p in points]


def fiber_base_index(charts: list[StandardChart]) -> int:
    """Index of the chart whose scale normalises a shared fibre coordinate."""

    best = 0
    for index, chart in enumerate(charts):
        if chart.r > charts[best].r:
            best = index
    return best


__all__ = [
    "RamPoint",
    "StandardChart",
    "build_chart",
    "fiber_base_index",
    "local_parameters",
    "omega01_series",
    "ramification_order",
    "with_local_data",
]
