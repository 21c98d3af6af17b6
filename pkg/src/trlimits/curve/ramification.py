"""Exact discovery of ramification points and fibres of ``x``.

Locations are found with sympy (factorisation over Q(t), then radicals) and
converted back into the curve's field. ``prepare_curve`` runs the search once to
learn which square roots and roots of unity are needed, extends the field, and
returns the curve over the extended field, so that later passes are exact.
"""

from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from typing import Any, Iterable

import sympy

from trlimits.algebra import NumberField, Polynomial, principal_root
from trlimits.algebra.paramrational import T
from trlimits.algebra.rational import INFINITY, divide, is_infinity
from trlimits.algebra.text import algebraic_requirements, scalar_to_sympy, sympy_to_scalar
from trlimits.errors import FieldExtensionRequiredError
from trlimits.runtime.telemetry import record_event, span
from trlimits.series import W

from .local import RamPoint, ramification_order, with_local_data
from .model import LOGGER_NAME, SpectralCurve, location_key

_T_POSITIVE = sympy.Symbol("t", positive=True)


def _to_sympy(poly: Polynomial) -> sympy.Expr:
    return sympy.Add(*(scalar_to_sympy(c) * W**i for i, c in enumerate(poly.coeffs)))


def _sympy_roots(poly: Polynomial) -> list[tuple[sympy.Expr, int]]:
    """Roots with multiplicities as radical expressions (``t`` taken positive)."""

    if poly.degree <= 0:
        return []
    expr = _to_sympy(poly).subs(T, _T_POSITIVE)
    try:
        _, factors = sympy.factor_list(expr, W)
    except sympy.PolynomialError:
        factors = [(expr, 1)]
    found: dict[sympy.Expr, int] = defaultdict(int)
    for factor, multiplicity in factors:
        if not factor.has(W):
            continue
        degree = sympy.degree(factor, W)
        roots = sympy.roots(factor, W)
        if sum(roots.values()) < degree:
            raise FieldExtensionRequiredError(
                f"roots of {sympy.sstr(factor)} are not expressible in radicals",
                polynomial=sympy.sstr(factor.subs(_T_POSITIVE, T)),
            )
        for root, count in roots.items():
            found[sympy.simplify(root.subs(_T_POSITIVE, T))] += count * multiplicity
    return list(found.items())


def solve_polynomial(poly: Polynomial, field: NumberField) -> list[tuple[Any, int]]:
    """Exact roots of ``poly`` in ``field`` (or in ``field(t)``) with multiplicities."""

    roots: list[tuple[Any, int]] = []
    for expr, multiplicity in _sympy_roots(poly):
        try:
            value = sympy_to_scalar(expr, field)
        except FieldExtensionRequiredError as exc:
            raise FieldExtensionRequiredError(
                f"root {expr} of {sympy.sstr(_to_sympy(poly))} is outside the active field",
                polynomial=sympy.sstr(_to_sympy(poly)),
            ) from exc
        roots.append((value, multiplicity))
    roots.sort(key=lambda item: location_key(item[0]))
    return roots


def _requirements(poly: Polynomial) -> tuple[set[int], set[Any]]:
    zetas: set[int] = set()
    squares: set[Any] = set()
    for expr, _ in _sympy_roots(poly):
        z, s = algebraic_requirements(expr)
        zetas |= z
        squares |= s
    return zetas, squares


def find_ramification(curve: SpectralCurve) -> list[RamPoint]:
    """All points with ramification order at least 2, local data unfilled.

    These are the zeros of ``dx`` and the poles of ``x`` of order at least 2, on
    every component, including ``w = oo``.
    """

    with span("curve::find_ramification", logger_name=LOGGER_NAME, metadata={"curve": curve.name}):
        points: list[RamPoint] = []
        for index, comp in enumerate(curve.components):
            locations: list[Any] = []
            for root, _ in solve_polynomial(comp.x.derivative().numerator, curve.field):
                locations.append(root)
            for root, multiplicity in solve_polynomial(comp.x.denominator, curve.field):
                if multiplicity >= 2:
                    locations.append(root)
            locations.append(INFINITY)
            for location in locations:
                r, q = ramification_order(curve, index, location)
                if r >= 2:
                    points.append(RamPoint(index, location, r, q))
        points.sort(key=lambda p: (p.component, location_key(p.location)))
        record_event(
            "curve.ramification_discovered",
            level="debug",
            data={"curve": curve.name, "count": len(points)},
            logger_name=LOGGER_NAME,
        )
        return points


def fiber_points(curve: SpectralCurve, value: Any) -> list[tuple[int, Any, int]]:
    """Every ``(component, location, order)`` with ``x = value`` (``value`` may be oo)."""

    found: list[tuple[int, Any, int]] = []
    for index, comp in enumerate(curve.components):
        x = comp.x
        if is_infinity(value):
            poly = x.denominator
        else:
            poly = x.numerator - x.denominator * Polynomial((value,))
        for root, multiplicity in solve_polynomial(poly, curve.field):
            found.append((index, root, multiplicity))
        at_infinity = x(INFINITY)
        if (is_infinity(value) and is_infinity(at_infinity)) or (
            not is_infinity(value) and not is_infinity(at_infinity) and at_infinity == value
        ):
            found.append((index, INFINITY, ramification_order(curve, index, INFINITY)[0]))
    return found


def branch_values(points: Iterable[RamPoint]) -> dict[Any, list[RamPoint]]:
    """Ramification points grouped by their common ``x``-value, in input order."""

    groups: dict[Any, list[RamPoint]] = {}
    for point in points:
        groups.setdefault(point.x_value, []).append(point)
    return groups


def prepare_curve(
    curve: SpectralCurve, *, fibers: bool = False, contributing_only: bool = False
) -> SpectralCurve:
    """The curve over a field holding its ramification data and deck roots of unity.

    With ``contributing_only=True`` only the points with ``s_bar >= 0`` get their
    deck roots of unity.

    With ``fibers=True`` the field also holds every point of every fibre over a
    branch value, and the square roots relating the chart scales of points that
    share a fibre.
    """

    zetas: set[int] = set()
    squares: set[Any] = set()
    for comp in curve.components:
        for poly in (comp.x.derivative().numerator, comp.x.denominator):
            z, s = _requirements(poly)
            zetas |= z
            squares |= s
    field = curve.field.extended(roots_of_unity=zetas, square_roots=squares)
    current = curve.over(field)
    points = find_ramification(current)
    if contributing_only:
        points = [p for p in with_local_data(current, points) if p.contributes]
    orders = {p.r for p in points if p.r >= 3}
    if fibers:
        for value in {p.x_value for p in points}:
            for comp in current.components:
                poly = comp.x.denominator
                if not is_infinity(value):
                    poly = comp.x.numerator - comp.x.denominator * Polynomial((value,))
                z, s = _requirements(poly)
                zetas |= z
                squares |= s
    field = field.extended(roots_of_unity=zetas | orders, square_roots=squares)
    current = current.over(field)
    if fibers:
        field = _scale_roots(current, field)
        current = current.over(field)
    if field is not curve.field:
        record_event(
            "curve.field_extended",
            level="debug",
            data={"curve": curve.name, "field": repr(field)},
            logger_name=LOGGER_NAME,
        )
    return current


def _scale_roots(curve: SpectralCurve, field: NumberField) -> NumberField:
    """Add the square roots needed to compare chart scales inside each fibre."""

    from .local import build_chart, fiber_base_index

    squares: set[Any] = set()
    points = find_ramification(curve)
    for value in {p.x_value for p in points}:
        members = fiber_points(curve, value)
        charts = [build_chart(curve, c, loc, terms=1) for c, loc, _ in members]
        base = charts[fiber_base_index(charts)]
        for chart in charts:
            ratio = divide(base.scale, chart.scale) if not chart.pole else divide(chart.scale, base.scale)
            try:
                principal_root(ratio, chart.r)
            except FieldExtensionRequiredError:
                if chart.r == 2 and isinstance(ratio, Fraction):
                    squares.add(ratio)
    return field.extended(square_roots=squares) if squares else field


__all__ = [
    "branch_values",
    "fiber_points",
    "find_ramification",
    "prepare_curve",
    "solve_polynomial",
]
