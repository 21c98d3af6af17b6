"""The ``trlimits`` command line: curve checks, correlators, polygons, family limits."""

from .commands import TypeWindow, analyze_polygon, check_curve, compute_correlators, family_limit, parse_point_list
from .report import (
    EXIT_FAILURE,
    EXIT_NON_ADMISSIBLE,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_UNSUPPORTED,
    REPORT_SCHEMA,
    Report,
    exit_code_for,
)

__all__ = [
    "EXIT_FAILURE",
    "EXIT_NON_ADMISSIBLE",
    "EXIT_OK",
    "EXIT_PARSE",
    "EXIT_UNSUPPORTED",
    "REPORT_SCHEMA",
    "Report",
    "TypeWindow",
    "analyze_polygon",
    "check_curve",
    "compute_correlators",
    "exit_code_for",
    "family_limit",
    "parse_point_list",
]
