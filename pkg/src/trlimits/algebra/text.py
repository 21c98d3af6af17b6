"""Canonical text for scalars and the sympy bridge used by parsers and renderers.

``format_scalar`` writes ``3/2``, ``3/2*z3^2 - 1`` or ``(t^2+1)/(t-7)`` and
``parse_scalar`` reads the same forms back exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Iterable, Mapping

import mpmath
import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)

from trlimits.errors import FieldExtensionRequiredError, ParseError, TransalgebraicCurveError

from .numberfield import FieldElement, NumberField, format_field_element
from .paramrational import ParamRational, T, make_param
from .rational import as_scalar, divide, format_fraction

_TRANSFORMS = standard_transformations + (convert_xor, implicit_multiplication)
_TRANSCENDENTAL = (sympy.log, sympy.exp, sympy.sin, sympy.cos, sympy.tan, sympy.LambertW)


def format_scalar(value: Any) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return format_fraction(value)
    if isinstance(value, FieldElement):
        return format_field_element(value)
    if isinstance(value, ParamRational):
        num = _format_t_polynomial(value.numerator)
        if value.denominator == (Fraction(1),):
            return num
        den = _format_t_polynomial(value.denominator)
        if len([c for c in value.numerator if c != 0]) > 1:
            num = f"({num})"
        if len([c for c in value.denominator if c != 0]) > 1 or value.denominator[-1] != 1:
            den = f"({den})"
        return f"{num}/{den}"
    raise TypeError(f"not a scalar: {value!r}")


def _format_t_polynomial(coeffs: tuple[Any, ...]) -> str:
    parts: list[str] = []
    for power in range(len(coeffs) - 1, -1, -1):
        coeff = coeffs[power]
        if coeff == 0:
            continue
        monomial = "" if power == 0 else ("t" if power == 1 else f"t^{power}")
        if isinstance(coeff, FieldElement):
            body = f"({format_field_element(coeff)})"
            term = body if not monomial else f"{body}*{monomial}"
            sign = "+"
        else:
            sign = "-" if coeff < 0 else "+"
            magnitude = abs(coeff)
            if not monomial:
                term = format_fraction(magnitude)
            elif magnitude == 1:
                term = monomial
            else:
                term = f"{format_fraction(magnitude)}*{monomial}"
        parts.append(sign + term)
    text = "".join(parts)
    return text[1:] if text.startswith("+") else text


def parse_expression(
    text: str, symbols: Iterable[str], *, source: str | None = None
) -> sympy.Expr:
    """Parse ``text`` allowing only the named symbols; ``^`` means power."""

    names = set(symbols)
    local = {name: sympy.Symbol(name) for name in names}
    local.setdefault("I", sympy.I)
    local.setdefault("pi", sympy.pi)
    try:
        expr = parse_expr(text, local_dict=local, transformations=_TRANSFORMS, evaluate=True)
    except (SyntaxError, TypeError, ValueError, sympy.SympifyError) as exc:
        line, column = _error_position(exc)
        raise ParseError(f"cannot parse {text!r}: {exc}", source=source, line=line, column=column) from exc
    except Exception as exc:  # tokenizer errors surface with several types
        raise ParseError(f"cannot parse {text!r}: {exc}", source=source) from exc
    if not isinstance(expr, sympy.Basic):
        expr = sympy.sympify(expr)
    if any(expr.has(func) for func in _TRANSCENDENTAL):
        raise TransalgebraicCurveError(f"transalgebraic expression {text!r} (logarithm or exponential)")
    unknown = {str(s) for s in expr.free_symbols} - names
    if unknown:
        raise ParseError(f"unknown symbols {sorted(unknown)} in {text!r}", source=source)
    return expr


def _error_position(exc: Exception) -> tuple[int | None, int | None]:
    if isinstance(exc, SyntaxError):
        return exc.lineno, exc.offset
    return None, None


def parse_scalar(text: str, field: NumberField | None = None) -> Any:
    """Inverse of :func:`format_scalar` over ``field`` (rationals by default)."""

    names = ["t"]
    if field is not None and field.degree > 1:
        names.append(field.symbol)
    expr = parse_expression(text, names, source=text)
    values: dict[str, Any] = {"t": ParamRational.variable()}
    if field is not None and field.degree > 1:
        values[field.symbol] = field.generator()
    return evaluate_rational_expression(expr, values, field=field)


def evaluate_rational_expression(
    expr: sympy.Expr, values: Mapping[str, Any], *, field: NumberField | None = None
) -> Any:
    """Evaluate a rational expression in the named symbols with exact scalars."""

    num, den = sympy.fraction(sympy.together(sympy.sympify(expr)))
    return divide(
        _evaluate_polynomial(num, values, field), _evaluate_polynomial(den, values, field)
    )


def _evaluate_polynomial(expr: sympy.Expr, values: Mapping[str, Any], field: NumberField | None) -> Any:
    gens = sorted((s for s in expr.free_symbols), key=str)
    if not gens:
        return sympy_number_to_scalar(expr, field)
    poly = sympy.Poly(sympy.expand(expr), *gens)
    total: Any = Fraction(0)
    for monomial, coeff in poly.terms():
        term = sympy_number_to_scalar(coeff, field)
        for gen, power in zip(gens, monomial):
            if power:
                term = term * values[str(gen)] ** power
        total = total + term
    return total


def sympy_number_to_scalar(value: Any, field: NumberField | None = None) -> Any:
    value = sympy.nsimplify(value) if isinstance(value, sympy.Float) else sympy.sympify(value)
    if value.is_Rational:
        return Fraction(int(value.p), int(value.q))
    if field is None:
        raise FieldExtensionRequiredError(f"{value} is not rational")
    return field.from_sympy(value)


def sympy_to_scalar(expr: Any, field: NumberField | None = None, *, symbol: sympy.Symbol = T) -> Any:
    """Convert a sympy rational function of ``t`` (or a number) to an exact scalar."""

    expr = sympy.sympify(expr)
    extra = {str(s) for s in expr.free_symbols} - {str(symbol)}
    if extra:
        raise ParseError(f"unexpected symbols {sorted(extra)} in {expr}")
    return evaluate_rational_expression(
        expr, {str(symbol): ParamRational.variable()}, field=field
    )


def scalar_to_sympy(value: Any, symbol: sympy.Symbol = T) -> sympy.Expr:
    value = as_scalar(value)
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, FieldElement):
        theta = value.field.theta
        return sympy.Add(
            *(
                sympy.Rational(c.numerator, c.denominator) * theta**i
                for i, c in enumerate(value.coeffs)
                if c
            )
        )
    if isinstance(value, ParamRational):
        return value.to_sympy(symbol)
    raise TypeError(f"not a scalar: {value!r}")


def lift_scalar(value: Any, field: NumberField) -> Any:
    """Re-express ``value`` as an element of ``field`` (which must contain it)."""

    value = as_scalar(value)
    if isinstance(value, Fraction):
        return value
    if isinstance(value, FieldElement):
        if value.field is field:
            return value
        return field.from_sympy(scalar_to_sympy(value))
    if isinstance(value, ParamRational):
        return make_param(
            tuple(lift_scalar(c, field) for c in value.numerator),
            tuple(lift_scalar(c, field) for c in value.denominator),
        )
    raise TypeError(f"not a scalar: {value!r}")


def scalar_to_complex(value: Any, dps: int = 30) -> Any:
    """Complex value of a constant scalar under the field's fixed embedding."""

    value = as_scalar(value)
    if isinstance(value, Fraction):
        with mpmath.workdps(dps + 10):
            return mpmath.mpc(mpmath.mpf(value.numerator) / value.denominator)
    if isinstance(value, FieldElement):
        return value.to_complex(dps)
    raise TypeError(f"{value!r} has no numeric value; specialise t first")


def algebraic_requirements(expr: Any) -> tuple[frozenset[int], frozenset[Fraction]]:
    """Roots of unity and square roots of rationals needed to hold ``expr`` exactly."""

    expr = sympy.sympify(expr)
    zetas: set[int] = set()
    squares: set[Fraction] = set()
    for atom in expr.atoms(sympy.Pow):
        base, exponent = atom.as_base_exp()
        if not exponent.is_Rational or exponent.q == 1:
            if exponent.is_Rational:
                continue
            raise FieldExtensionRequiredError(f"non-algebraic power {atom}")
        if base == -1:
            zetas.add(2 * int(exponent.q))
        elif exponent.q == 2 and base.is_Rational:
            squares.add(Fraction(int(base.p), int(base.q)))
        else:
            raise FieldExtensionRequiredError(
                f"{atom} is not in any supported field", polynomial=str(atom)
            )
    for atom in expr.atoms(sympy.exp):
        ratio = sympy.nsimplify(atom.args[0] / (2 * sympy.pi * sympy.I))
        if not ratio.is_Rational:
            raise TransalgebraicCurveError(f"transcendental factor {atom}")
        zetas.add(int(ratio.q))
    if expr.atoms(sympy.CRootOf):
        raise FieldExtensionRequiredError(f"{expr} needs roots not expressible by radicals")
    if expr.has(sympy.I):
        squares.add(Fraction(-1))
    return frozenset(zetas), frozenset(squares)


__all__ = [
    "algebraic_requirements",
    "evaluate_rational_expression",
    "format_scalar",
    "lift_scalar",
    "scalar_to_complex",
    "parse_expression",
    "parse_scalar",
    "scalar_to_sympy",
    "sympy_number_to_scalar",
    "sympy_to_scalar",
]
