"""Deformation families, splitting profiles, limits at the central fibre."""

from .limits import (
    DEFAULT_SAMPLES,
    METHODS,
    DichotomyRow,
    FamilyCorrelator,
    FamilyRecursion,
    LimitReport,
    check_specialization,
    commutation_table,
    correlators_over_t,
    family_admissibility,
    limit_at_center,
    t_valuation,
)
from .model import (
    CASES,
    BadSet,
    FamilySpec,
    Homogeneity,
    V,
    build_rs_family,
    chebyshev_family,
    compute_bad_set,
    custom_family,
    family_from_spec,
    generic_rs_family,
    norbury_family,
    seven_five_family,
    singular_family,
)
from .profile import PROFILE_SEPARATOR, ProfileEntry, SplitProfile, expected_profile, ramification_profile
from .symplectic import (
    MonomialType,
    congruence_generated,
    geometric_condition,
    phi_b_on_type,
    phi_orbit,
    reduce_type,
    type_local_data,
    well_defined_type,
)

__all__ = [
    "BadSet",
    "CASES",
    "DEFAULT_SAMPLES",
    "DichotomyRow",
    "FamilyCorrelator",
    "FamilyRecursion",
    "FamilySpec",
    "Homogeneity",
    "LimitReport",
    "METHODS",
    "MonomialType",
    "PROFILE_SEPARATOR",
    "ProfileEntry",
    "SplitProfile",
    "V",
    "build_rs_family",
    "chebyshev_family",
    "check_specialization",
    "commutation_table",
    "compute_bad_set",
    "congruence_generated",
    "correlators_over_t",
    "custom_family",
    "expected_profile",
    "family_admissibility",
    "family_from_spec",
    "generic_rs_family",
    "geometric_condition",
    "limit_at_center",
    "norbury_family",
    "phi_b_on_type",
    "phi_orbit",
    "ramification_profile",
    "reduce_type",
    "seven_five_family",
    "singular_family",
    "t_valuation",
    "type_local_data",
    "well_defined_type",
]
