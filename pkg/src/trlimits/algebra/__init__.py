"""Exact scalars: rationals, abelian number fields, rational functions of t, Farey data."""

from .extfraction import (
    ExtFraction,
    are_farey_neighbours,
    farey_neighbours,
    farey_sequence,
    in_farey,
    parse_ext_fraction,
)
from .numberfield import FieldElement, NumberField, field_of, lcm_all
from .paramrational import ParamRational, T, limit_at_zero, make_param, specialize, valuation_at_zero
from .polynomial import Polynomial
from .rational import INFINITY, as_scalar, divide, is_infinity, rational_root
from .roots import principal_root
from .text import (
    algebraic_requirements,
    format_scalar,
    lift_scalar,
    parse_expression,
    parse_scalar,
    scalar_to_complex,
    scalar_to_sympy,
    sympy_number_to_scalar,
    sympy_to_scalar,
)

__all__ = [
    "ExtFraction",
    "FieldElement",
    "INFINITY",
    "NumberField",
    "ParamRational",
    "Polynomial",
    "T",
    "algebraic_requirements",
    "are_farey_neighbours",
    "as_scalar",
    "divide",
    "farey_neighbours",
    "farey_sequence",
    "field_of",
    "format_scalar",
    "in_farey",
    "is_infinity",
    "lift_scalar",
    "lcm_all",
    "limit_at_zero",
    "make_param",
    "parse_expression",
    "parse_ext_fraction",
    "parse_scalar",
    "principal_root",
    "rational_root",
    "scalar_to_complex",
    "scalar_to_sympy",
    "specialize",
    "sympy_number_to_scalar",
    "sympy_to_scalar",
    "valuation_at_zero",
]
