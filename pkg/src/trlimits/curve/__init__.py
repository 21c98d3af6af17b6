"""Genus-0 spectral curves, their ramification and local data."""

from .admissibility import (
    LocalVerdict,
    admissibility_of_type,
    is_locally_admissible,
    local_admissibility_report,
    require_locally_admissible,
)
from .construction import (
    CurveInput,
    PolynomialCurve,
    curve_from_expressions,
    curve_from_polynomial,
    curve_from_spec,
    width_one_functional,
)
from .local import (
    RamPoint,
    StandardChart,
    build_chart,
    fiber_base_index,
    local_parameters,
    omega01_series,
    ramification_order,
    with_local_data,
)
from .model import CurveComponent, SpectralCurve, coefficient_field, location_key
from .ramification import branch_values, fiber_points, find_ramification, prepare_curve, solve_polynomial

__all__ = [
    "CurveComponent",
    "CurveInput",
    "LocalVerdict",
    "PolynomialCurve",
    "RamPoint",
    "SpectralCurve",
    "StandardChart",
    "admissibility_of_type",
    "branch_values",
    "build_chart",
    "coefficient_field",
    "curve_from_expressions",
    "curve_from_polynomial",
    "curve_from_spec",
    "fiber_base_index",
    "fiber_points",
    "find_ramification",
    "is_locally_admissible",
    "local_admissibility_report",
    "local_parameters",
    "location_key",
    "omega01_series",
    "prepare_curve",
    "ramification_order",
    "require_locally_admissible",
    "solve_polynomial",
    "with_local_data",
]
