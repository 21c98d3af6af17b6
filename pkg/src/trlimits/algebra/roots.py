"""Principal r-th roots of exact scalars.

Positive rationals get their positive root and negative rationals with odd ``r``
their real root. Algebraic values get the root, among those lying in their field,
whose coefficient vector is lexicographically least. Anything else needs a field
extension.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any

import sympy

from trlimits.errors import DomainError, FieldExtensionRequiredError

from .numberfield import FieldElement
from .paramrational import ParamRational, T
from .rational import rational_root


def principal_root(value: Any, r: int) -> Any:
    if r < 1:
        raise DomainError("root order must be positive")
    if r == 1:
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        value = Fraction(value)
    if isinstance(value, Fraction):
        root = rational_root(value, r)
        if root is None:
            raise FieldExtensionRequiredError(
                f"{value} has no rational {r}-th root", polynomial=f"x^{r} - ({value})"
            )
        return root
    if isinstance(value, FieldElement):
        return _field_root(value, r)
    if isinstance(value, ParamRational):
        return _param_root(value, r)
    raise TypeError(f"not a scalar: {value!r}")


def _sort_key(value: Any, degree: int) -> tuple[Fraction, ...]:
    if isinstance(value, FieldElement):
        return tuple(value.coeffs)
    return (Fraction(value),) + (Fraction(0),) * (degree - 1)


def _field_root(value: FieldElement, r: int) -> Any:
    from .text import scalar_to_sympy

    field = value.field
    candidates: list[Any] = []
    try:
        base = field.from_sympy(sympy.root(scalar_to_sympy(value), r))
    except FieldExtensionRequiredError:
        base = None
    if base is not None:
        if field.has_zeta(r):
            zeta = field.zeta(r)
            candidates = [base * zeta**j for j in range(r)]
        else:
            candidates = [base]
    if not candidates:
        raise FieldExtensionRequiredError(
            f"{value} has no {r}-th root in {field}", polynomial=f"x^{r} - ({value})"
        )
    return min(candidates, key=lambda c: _sort_key(c, field.degree))


def _param_root(value: ParamRational, r: int) -> Any:
    from .text import sympy_to_scalar

    def root_of(coeffs: tuple[Any, ...]) -> sympy.Expr:
        from .text import scalar_to_sympy

        poly = sum((scalar_to_sympy(c) * T**i for i, c in enumerate(coeffs)), sympy.Integer(0))
        constant, factors = sympy.factor_list(poly, T)
        result: sympy.Expr = sympy.Integer(1)
        for factor, multiplicity in factors:
            if multiplicity % r:
                raise FieldExtensionRequiredError(
                    f"{value} is not an {r}-th power in t", polynomial=f"x^{r} - ({value})"
                )
            result *= factor ** (multiplicity // r)
        const = Fraction(int(sympy.Rational(constant).p), int(sympy.Rational(constant).q))
        root = rational_root(const, r)
        if root is None:
            raise FieldExtensionRequiredError(
                f"{value} is not an {r}-th power in t", polynomial=f"x^{r} - ({value})"
            )
        return result * sympy.Rational(root.numerator, root.denominator)

    if any(isinstance(c, FieldElement) for c in value.numerator + value.denominator):
        raise FieldExtensionRequiredError(f"{r}-th roots of {value} are not supported")
    return sympy_to_scalar(root_of(value.numerator) / root_of(value.denominator))


__all__ = ["principal_root"]
