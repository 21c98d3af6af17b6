"""Globalisation criteria on local data of fibres of ``x``."""

from .criteria import (
    BksReport,
    FamilyReport,
    FamilySample,
    FiberVerdict,
    PairVerdict,
    SampleVerdict,
    bks_predicates,
    family_admissibility_report,
    fiber_globalisable,
    globalisation_rule,
    is_non_resonant,
    pair_satisfies_C1C2,
    pair_satisfies_Ci_Cii,
    separates_fibres,
)
from .local_data import (
    INFINITE_S,
    FiberData,
    LocalData,
    branch_fibers,
    fiber_from_curve,
    fibers_from_json,
    local_data_from_json,
)

__all__ = [
    "BksReport",
    "FamilyReport",
    "FamilySample",
    "FiberData",
    "FiberVerdict",
    "INFINITE_S",
    "LocalData",
    "PairVerdict",
    "SampleVerdict",
    "bks_predicates",
    "branch_fibers",
    "family_admissibility_report",
    "fiber_from_curve",
    "fiber_globalisable",
    "fibers_from_json",
    "globalisation_rule",
    "is_non_resonant",
    "local_data_from_json",
    "pair_satisfies_C1C2",
    "pair_satisfies_Ci_Cii",
    "separates_fibres",
]
