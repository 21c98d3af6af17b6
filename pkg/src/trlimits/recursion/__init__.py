"""Topological recursion: pole basis, W' assembly, exact and numeric engines, self-checks."""

from .assembly import Assembler, PinnedSpectator, assemble_w_prime, compositions, set_partitions
from .basis import BasisLabel, Sheet, bidifferential
from .checks import (
    LoopEquationReport,
    ModeComparison,
    ProjectionReport,
    SelfCheckReport,
    check_comb_identity,
    check_loop_equations,
    check_primitive_independence,
    check_projection_property,
    check_skip_rule,
    compare_modes,
    default_spectators,
    pole_allowance,
    projection_of,
    self_check,
)
from .correlator import (
    SCHEMA_VERSION,
    Correlator,
    correlators_agree,
    lift_correlator,
    variables,
    zero_correlator,
)
from .engine import (
    StepReport,
    TopologicalRecursion,
    compute_correlators,
    global_tr_step,
    local_tr_step,
    stable_types,
)
from .numeric import ContourRecursion, contour_correlator_numeric, relative_difference
from .sheets import MODES, Mode, ResidueGroup, build_groups

__all__ = [
    "Assembler",
    "BasisLabel",
    "ContourRecursion",
    "Correlator",
    "LoopEquationReport",
    "ModeComparison",
    "MODES",
    "Mode",
    "PinnedSpectator",
    "ProjectionReport",
    "ResidueGroup",
    "SCHEMA_VERSION",
    "SelfCheckReport",
    "Sheet",
    "StepReport",
    "TopologicalRecursion",
    "assemble_w_prime",
    "bidifferential",
    "build_groups",
    "check_comb_identity",
    "check_loop_equations",
    "check_primitive_independence",
    "check_projection_property",
    "check_skip_rule",
    "compare_modes",
    "compositions",
    "compute_correlators",
    "contour_correlator_numeric",
    "correlators_agree",
    "default_spectators",
    "global_tr_step",
    "lift_correlator",
    "local_tr_step",
    "pole_allowance",
    "projection_of",
    "relative_difference",
    "self_check",
    "set_partitions",
    "stable_types",
    "variables",
    "zero_correlator",
]
