"""Genus-0 spectral curves given by rational functions of a global coordinate ``w``.

A curve is a finite list of components, each a copy of P^1 with rational ``x`` and
``y``. The bidifferential is always ``dw1 dw2 / (w1 - w2)^2`` on each component and
zero between different components, so it is not stored.
"""

from __future__ import annotations

from dataclasses import dataclass
from dataclasses import field as dc_field
from typing import Any, Iterable, Optional, Sequence

import sympy

from trlimits.algebra import FieldElement, NumberField, ParamRational, lift_scalar, specialize
from trlimits.algebra.rational import INFINITY, is_infinity
from trlimits.errors import InvalidCurveError
from trlimits.runtime.telemetry import record_event
from trlimits.series import RationalFunction1V, W

LOGGER_NAME = "trlimits.curve"


@dataclass(frozen=True, slots=True)
class CurveComponent:
    """One rational component: ``x(w)`` and ``y(w)`` on P^1."""

    x: RationalFunction1V
    y: RationalFunction1V
    label: str = ""

    def __post_init__(self) -> None:
        if self.x.is_constant():
            raise InvalidCurveError(f"x is constant on component {self.label or '?'}")
        if self.y.is_zero():
            raise InvalidCurveError(f"y vanishes identically on component {self.label or '?'}")

    @property
    def dx(self) -> RationalFunction1V:
        return self.x.derivative()

    @property
    def omega01(self) -> RationalFunction1V:
        """Coefficient of ``dw`` in ``y dx``."""

        return self.y * self.x.derivative()

    def map_coefficients(self, func: Any) -> "CurveComponent":
        return CurveComponent(self.x.map_coefficients(func), self.y.map_coefficients(func), self.label)

    def is_parametric(self) -> bool:
        return self.x.is_parametric() or self.y.is_parametric()

    def x_value(self, location: Any) -> Any:
        return self.x(location)


@dataclass(frozen=True, slots=True)
class SpectralCurve:
    """A spectral curve with every component parametrized by ``w``.

    ``field`` is the coefficient field of all exact data attached to the curve
    (coefficients, ramification locations, roots of unity for deck maps).
    ``dropped`` lists horizontal components removed at construction.
    """

    components: tuple[CurveComponent, ...]
    field: NumberField = dc_field(default_factory=NumberField.rationals)
    name: str = "curve"
    dropped: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.components:
            raise InvalidCurveError("a spectral curve needs at least one component")

    # -- constructors -------------------------------------------------

    @classmethod
    def from_rational(
        cls,
        x: RationalFunction1V,
        y: RationalFunction1V,
        *,
        name: str = "curve",
        field: NumberField | None = None,
    ) -> "SpectralCurve":
        return cls.from_components([(x, y)], name=name, field=field)

    @classmethod
    def from_components(
        cls,
        pairs: Iterable[tuple[RationalFunction1V, Optional[RationalFunction1V]]],
        *,
        name: str = "curve",
        field: NumberField | None = None,
        labels: Sequence[str] | None = None,
    ) -> "SpectralCurve":
        """Build a curve; a pair with ``y is None`` is a horizontal component and is dropped."""

        kept: list[CurveComponent] = []
        dropped: list[str] = []
        for index, (x, y) in enumerate(pairs):
            label = labels[index] if labels else f"C{index}"
            if y is None:
                dropped.append(label)
                record_event(
                    "curve.horizontal_component_dropped",
                    level="warning",
                    data={"curve": name, "component": label},
                    logger_name=LOGGER_NAME,
                )
                continue
            kept.append(CurveComponent(x, y, label))
        active = field or coefficient_field(kept)
        curve = cls(tuple(kept), NumberField.rationals(), name, tuple(dropped))
        return curve.over(active)

    @classmethod
    def from_sympy(
        cls,
        x: Any,
        y: Any,
        *,
        name: str = "curve",
        field: NumberField | None = None,
    ) -> "SpectralCurve":
        """Curve from sympy expressions in ``w`` (and possibly ``t``)."""

        from trlimits.algebra.text import algebraic_requirements

        if field is None:
            zetas, squares = algebraic_requirements(sympy.sympify(x) + sympy.sympify(y))
            field = NumberField.build(roots_of_unity=zetas, square_roots=squares)
        return cls.from_rational(
            RationalFunction1V.from_sympy(x, field),
            RationalFunction1V.from_sympy(y, field),
            name=name,
            field=field,
        )

    # -- views --------------------------------------------------------

    @property
    def x(self) -> RationalFunction1V:
        return self.components[0].x

    @property
    def y(self) -> RationalFunction1V:
        return self.components[0].y

    def component(self, index: int) -> CurveComponent:
        return self.components[index]

    def is_parametric(self) -> bool:
        return any(c.is_parametric() for c in self.components)

    def over(self, field: NumberField) -> "SpectralCurve":
        """The same curve with every coefficient expressed in ``field``."""

        if field is self.field:
            return self
        lifted = tuple(c.map_coefficients(lambda v: lift_scalar(v, field)) for c in self.components)
        return SpectralCurve(lifted, field, self.name, self.dropped)

    def specialize(self, t_value: Any, *, name: str | None = None) -> "SpectralCurve":
        """Fibre of a parametric curve at ``t = t_value``."""

        value = lift_scalar(t_value, self.field)
        comps = tuple(
            c.map_coefficients(lambda v: specialize(v, value)) for c in self.components
        )
        return SpectralCurve(comps, self.field, name or f"{self.name}@t={t_value}", self.dropped)

    def x_value(self, component: int, location: Any) -> Any:
        return self.components[component].x(location)

    def to_sympy(self) -> list[tuple[sympy.Expr, sympy.Expr]]:
        return [(c.x.to_sympy(W), c.y.to_sympy(W)) for c in self.components]

    def describe(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "components": [
                {"label": c.label, "x": sympy.sstr(c.x.to_sympy()), "y": sympy.sstr(c.y.to_sympy())}
                for c in self.components
            ],
            "dropped": list(self.dropped),
            "field": repr(self.field),
        }


def coefficient_field(components: Iterable[CurveComponent]) -> NumberField:
    """The number field holding every coefficient (rationals when none is algebraic)."""

    found: NumberField | None = None
    for comp in components:
        for value in comp.x.coefficients() + comp.y.coefficients():
            inner = (
                value.numerator + value.denominator if isinstance(value, ParamRational) else (value,)
            )
            for item in inner:
                if isinstance(item, FieldElement):
                    if found is not None and item.field is not found:
                        found = found.extended(
                            roots_of_unity=item.field.requirements[0],
                            square_roots=item.field.requirements[1],
                        )
                    elif found is None:
                        found = item.field
    return found or NumberField.rationals()


def location_key(location: Any) -> tuple[int, str]:
    """Sort key placing finite locations before infinity, deterministically."""

    from trlimits.algebra.text import format_scalar

    if is_infinity(location):
        return (1, "")
    return (0, format_scalar(location))


__all__ = [
    "INFINITY",
    "CurveComponent",
    "SpectralCurve",
    "coefficient_field",
    "location_key",
]
