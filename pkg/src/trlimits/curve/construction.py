"""Spectral curves from a polynomial ``P(x, y)`` or from a JSON curve spec.

``curve_from_polynomial`` parametrizes every irreducible factor whose Newton
polygon has lattice width at most one. After a unimodular change of monomials
such a factor reads ``U^m (A(V) + U B(V))`` (two lines) or ``U^m A(V)`` (one
line), and ``V = w`` gives a rational parametrization. Everything else gets a
Newton-polygon diagnostic only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import product
from typing import Any, Mapping

import sympy

from trlimits.algebra import NumberField, T, parse_expression, parse_scalar, scalar_to_sympy
from trlimits.algebra.text import algebraic_requirements
from trlimits.errors import (
    DomainError,
    FieldExtensionRequiredError,
    InternalEngineError,
    InvalidCurveError,
    ParseError,
    UnsupportedGenusError,
)
from trlimits.polygon import LatticePolygon, check_nondegenerate, interior_count, newton_polygon
from trlimits.runtime.telemetry import record_event, span
from trlimits.series import RationalFunction1V, W

from .model import LOGGER_NAME, SpectralCurve

X, Y = sympy.symbols("x y")


@dataclass(frozen=True, slots=True)
class PolynomialCurve:
    """Outcome of :func:`curve_from_polynomial`; ``curve`` is ``None`` when only a diagnostic exists."""

    polynomial: sympy.Expr
    polygon: LatticePolygon
    factors: tuple[sympy.Expr, ...]
    parametrizations: tuple[tuple[sympy.Expr, sympy.Expr], ...]
    curve: SpectralCurve | None
    notes: tuple[str, ...] = ()

    def require(self) -> SpectralCurve:
        if self.curve is None:
            raise InvalidCurveError("; ".join(self.notes) or "no rational parametrization")
        return self.curve

    def describe(self) -> dict[str, Any]:
        return {
            "polynomial": sympy.sstr(self.polynomial),
            "factors": [sympy.sstr(f) for f in self.factors],
            "parametrizations": [{"x": sympy.sstr(x), "y": sympy.sstr(y)} for x, y in self.parametrizations],
            "parametrized": self.curve is not None,
            "notes": list(self.notes),
        }


@dataclass(frozen=True, slots=True)
class CurveInput:
    """A parsed curve spec: the curve when one exists, and the polynomial analysis when given."""

    curve: SpectralCurve | None
    construction: PolynomialCurve | None = None
    t: Any = None

    def require(self) -> SpectralCurve:
        if self.curve is not None:
            return self.curve
        if self.construction is not None:
            return self.construction.require()
        raise InvalidCurveError("the curve spec defines no curve")


# -- width-one supports -------------------------------------------------


def width_one_functional(support: list[tuple[int, int]]) -> tuple[int, int] | None:
    """Primitive ``(a, b)`` with ``a i + b j`` taking at most two adjacent values on ``support``.

    The sign is chosen with ``(a, b)`` lexicographically negative.
    """

    base = support[0]
    diffs = [(p[0] - base[0], p[1] - base[1]) for p in support[1:]]
    diffs = [d for d in diffs if d != (0, 0)]
    if not diffs:
        return None
    d1 = diffs[0]
    d2 = next((d for d in diffs if d1[0] * d[1] - d1[1] * d[0] != 0), None)
    if d2 is None:
        g = sympy.igcd(*d1)
        candidates = [(d1[1] // g, -d1[0] // g)]
    else:
        det = d1[0] * d2[1] - d1[1] * d2[0]
        candidates = []
        for v1, v2 in product((-1, 0, 1), repeat=2):
            a_num = v1 * d2[1] - v2 * d1[1]
            b_num = d1[0] * v2 - d2[0] * v1
            if a_num % det or b_num % det:
                continue
            candidates.append((a_num // det, b_num // det))
    for a, b in candidates:
        if (a, b) == (0, 0) or sympy.igcd(a, b) != 1:
            continue
        values = {a * i + b * j for i, j in support}
        if max(values) - min(values) <= 1:
            return (a, b) if (a, b) < (0, 0) else (-a, -b)
    return None


def _completion(a: int, b: int) -> tuple[int, int]:
    """``(c, d)`` with ``a d - b c = 1``."""

    p, q, g = (int(v) for v in sympy.gcdex(sympy.Integer(a), sympy.Integer(b)))
    if g == -1:
        p, q, g = -p, -q, 1
    if g != 1:
        raise InternalEngineError(f"({a}, {b}) is not primitive")
    return -q, p


def _move_single_pole_to_infinity(x: sympy.Expr, y: sympy.Expr) -> tuple[sympy.Expr, sympy.Expr]:
    """Reparametrize so that ``x`` is a polynomial when it has one pole and that pole is finite."""

    num, den = sympy.fraction(sympy.cancel(x))
    if sympy.degree(num, W) > sympy.degree(den, W) or sympy.degree(den, W) < 1:
        return x, y
    poles = sympy.roots(sympy.Poly(den, W))
    if len(poles) != 1:
        return x, y
    (a,) = poles
    move = {W: a + 1 / W}
    return sympy.cancel(x.subs(move)), sympy.cancel(y.subs(move))


def _parametrize_factor(factor: sympy.Expr) -> list[tuple[sympy.Expr, sympy.Expr]] | None:
    poly = sympy.Poly(factor, X, Y)
    support = [tuple(m) for m in poly.monoms()]
    functional = width_one_functional(support)
    if functional is None:
        return None
    a, b = functional
    c, d = _completion(a, b)
    m = min(a * i + b * j for i, j in support)
    lower = sympy.Integer(0)
    upper = sympy.Integer(0)
    for (i, j), coeff in poly.terms():
        term = coeff * W ** (c * i + d * j)
        if a * i + b * j == m:
            lower += term
        else:
            upper += term
    if upper != 0:
        u = sympy.cancel(-lower / upper)
        pairs = [(u**a * W**c, u**b * W**d)]
    else:
        num, _ = sympy.fraction(sympy.together(lower))
        reduced = sympy.Poly(num, W)
        while reduced.eval(0) == 0:
            reduced = sympy.Poly(sympy.cancel(reduced.as_expr() / W), W)
        roots = sympy.roots(reduced)
        if sum(roots.values()) < reduced.degree():
            raise FieldExtensionRequiredError(
                f"roots of {reduced.as_expr()} are not expressible by radicals", polynomial=str(reduced.as_expr())
            )
        pairs = [(W**a * rho**c, W**b * rho**d) for rho in roots]
    result = []
    for x, y in pairs:
        x, y = _move_single_pole_to_infinity(sympy.cancel(x), sympy.cancel(y))
        if sympy.cancel(factor.subs({X: x, Y: y})) != 0:
            raise InternalEngineError(f"parametrization ({x}, {y}) does not satisfy {factor}")
        result.append((x, y))
    return result


def _factor(expr: sympy.Expr) -> list[sympy.Expr]:
    _, factors = sympy.factor_list(expr, X, Y)
    kept = []
    for factor, multiplicity in factors:
        symbols = factor.free_symbols & {X, Y}
        if not symbols:
            continue
        if multiplicity > 1:
            raise DomainError(f"P is not reduced: ({factor})^{multiplicity} divides it")
        if symbols == {X}:
            raise DomainError(f"factor {factor} lies in the x-only ring")
        if sympy.Poly(factor, X, Y).is_monomial:
            raise DomainError("{y = 0} is a component of the curve")
        kept.append(factor)
    if not kept:
        raise DomainError(f"{expr} has no factor involving x and y")
    return kept


def _genus_note(factor: sympy.Expr) -> str:
    polygon = newton_polygon(factor, X, Y)
    interior = interior_count(polygon)
    if interior == 0:
        return f"no rational parametrization is available for the support of {factor}"
    try:
        nondegenerate = check_nondegenerate(factor)
    except DomainError:
        return f"{factor} has {interior} interior points; nondegeneracy is undecided for symbolic t"
    if nondegenerate:
        raise UnsupportedGenusError(interior)
    return f"{factor} is degenerate with {interior} interior points; its genus is not determined"


def curve_from_polynomial(
    expr: Any, *, t: Any = None, name: str = "curve", field: NumberField | None = None
) -> PolynomialCurve:
    """Spectral curve of ``P(x, y) = 0``, one component per irreducible factor, in factor order."""

    polynomial = sympy.expand(sympy.sympify(expr))
    if t is not None:
        polynomial = sympy.expand(polynomial.subs(T, scalar_to_sympy(t)))
    with span("curve::from_polynomial", logger_name=LOGGER_NAME, metadata={"polynomial": sympy.sstr(polynomial)}):
        polygon = newton_polygon(polynomial, X, Y)
        factors = _factor(polynomial)
        if len(factors) > 1:
            record_event(
                "curve.reducible_polynomial",
                level="info",
                data={"curve": name, "factors": [sympy.sstr(f) for f in factors]},
                logger_name=LOGGER_NAME,
            )
        pairs: list[tuple[sympy.Expr, sympy.Expr]] = []
        notes: list[str] = []
        for factor in factors:
            found = _parametrize_factor(factor)
            if found is None:
                notes.append(_genus_note(factor))
            else:
                pairs.extend(found)
        curve = None
        if not notes:
            curve = curve_from_expressions(pairs, name=name, field=field)
        return PolynomialCurve(polynomial, polygon, tuple(factors), tuple(pairs), curve, tuple(notes))


def curve_from_expressions(
    pairs: list[tuple[sympy.Expr, sympy.Expr | None]],
    *,
    name: str = "curve",
    field: NumberField | None = None,
) -> SpectralCurve:
    """Curve from sympy ``(x, y)`` pairs in ``w``; ``y = None`` marks a horizontal component."""

    if field is None:
        zetas: set[int] = set()
        squares: set[Any] = set()
        for x, y in pairs:
            z, s = algebraic_requirements(x if y is None else x + y)
            zetas |= z
            squares |= s
        field = NumberField.build(roots_of_unity=zetas, square_roots=squares)
    converted = [
        (
            RationalFunction1V.from_sympy(x, field),
            None if y is None else RationalFunction1V.from_sympy(y, field),
        )
        for x, y in pairs
    ]
    return SpectralCurve.from_components(converted, name=name, field=field)


# -- JSON curve specs ---------------------------------------------------


def _text(value: Any, key: str, source: str) -> str:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return str(value)
    if not isinstance(value, str):
        raise ParseError(f"{key!r} must be a string, got {value!r}", source=source)
    return value


def _parametric(text: str, key: str, source: str, t_value: Any) -> sympy.Expr:
    expr = parse_expression(text, ["w", "t"], source=f"{source}:{key}")
    return expr if t_value is None else expr.subs(T, scalar_to_sympy(t_value))


def _load(document: str | Mapping[str, Any], source: str) -> Mapping[str, Any]:
    if isinstance(document, Mapping):
        return document
    try:
        loaded = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source=source, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(loaded, Mapping):
        raise ParseError("a curve spec is a JSON object", source=source)
    return loaded


def curve_from_spec(
    document: str | Mapping[str, Any], *, t: Any = None, source: str = "<curve spec>"
) -> CurveInput:
    """Read ``{"parametrization": {...}}``, ``{"components": [...]}`` or ``{"polynomial": ...}``.

    An explicit ``t`` overrides the document's ``"t"``. A component with
    ``"y": "oo"`` is horizontal and dropped.
    """

    spec = _load(document, source)
    name = str(spec.get("name", "curve"))
    t_value = t
    if t_value is None and spec.get("t") is not None:
        t_value = parse_scalar(_text(spec["t"], "t", source))
    if "parametrization" in spec:
        raw = spec["parametrization"]
        if not isinstance(raw, Mapping) or "x" not in raw or "y" not in raw:
            raise ParseError("'parametrization' needs 'x' and 'y'", source=source)
        entries = [raw]
    elif "components" in spec:
        entries = spec["components"]
        if not isinstance(entries, list) or not entries:
            raise ParseError("'components' must be a non-empty list", source=source)
    elif "polynomial" in spec:
        text = _text(spec["polynomial"], "polynomial", source)
        polynomial = parse_expression(text, ["x", "y", "t"], source=f"{source}:polynomial")
        construction = curve_from_polynomial(polynomial, t=t_value, name=name)
        return CurveInput(construction.curve, construction, t_value)
    else:
        raise ParseError("expected 'parametrization', 'components' or 'polynomial'", source=source)

    pairs: list[tuple[sympy.Expr, sympy.Expr | None]] = []
    for index, entry in enumerate(entries):
        if not isinstance(entry, Mapping) or "x" not in entry or "y" not in entry:
            raise ParseError(f"component {index} needs 'x' and 'y'", source=source)
        x = _parametric(_text(entry["x"], "x", source), f"{index}.x", source, t_value)
        y_text = _text(entry["y"], "y", source)
        y = None if y_text.strip() in ("oo", "inf") else _parametric(y_text, f"{index}.y", source, t_value)
        pairs.append((x, y))
    return CurveInput(curve_from_expressions(pairs, name=name), None, t_value)


__all__ = [
    "CurveInput",
    "PolynomialCurve",
    "curve_from_expressions",
    "curve_from_polynomial",
    "curve_from_spec",
    "width_one_functional",
]
