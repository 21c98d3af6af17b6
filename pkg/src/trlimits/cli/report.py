"""The JSON report every command emits, and the exit-code table."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from trlimits import __version__
from trlimits.errors import (
    FieldExtensionRequiredError,
    NonAdmissibleError,
    ParseError,
    TransalgebraicCurveError,
    UnsupportedGenusError,
)

REPORT_SCHEMA = 1

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_NON_ADMISSIBLE = 2
EXIT_UNSUPPORTED = 3
EXIT_PARSE = 4


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, NonAdmissibleError):
        return EXIT_NON_ADMISSIBLE
    if isinstance(exc, (UnsupportedGenusError, TransalgebraicCurveError, FieldExtensionRequiredError)):
        return EXIT_UNSUPPORTED
    if isinstance(exc, ParseError):
        return EXIT_PARSE
    return EXIT_FAILURE


def _error_payload(exc: BaseException) -> dict[str, Any]:
    payload: dict[str, Any] = {"type": type(exc).__name__, "message": str(exc)}
    for attribute in ("clause", "source", "line", "column"):
        value = getattr(exc, attribute, None)
        if value is not None:
            payload[attribute] = value
    return payload


@dataclass
class Report:
    """One command run.

    ``provenance`` names the predicate behind each verdict. ``timing`` is only
    serialised on request, so that repeated runs give identical bytes.
    """

    command: str
    inputs: dict[str, Any]
    backend: str = "exact"
    verdicts: dict[str, Any] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)
    payload: dict[str, Any] = field(default_factory=dict)
    timing: dict[str, float] = field(default_factory=dict)
    error: dict[str, Any] | None = None

    def verdict(self, key: str, value: Any, predicate: str) -> None:
        self.verdicts[key] = value
        self.provenance[key] = predicate

    def fail(self, exc: BaseException) -> int:
        self.error = _error_payload(exc)
        return exit_code_for(exc)

    def to_dict(self, *, include_timing: bool = False) -> dict[str, Any]:
        document: dict[str, Any] = {
            "schema": REPORT_SCHEMA,
            "tool": {"name": "trlimits", "version": __version__},
            "command": self.command,
            "inputs": self.inputs,
            "backend": self.backend,
            "verdicts": self.verdicts,
            "provenance": self.provenance,
            "payload": self.payload,
        }
        if self.error is not None:
            document["error"] = self.error
        if include_timing:
            document["timing"] = {key: round(value, 6) for key, value in self.timing.items()}
        return document

    def to_json(self, *, include_timing: bool = False) -> str:
        return json.dumps(self.to_dict(include_timing=include_timing), sort_keys=True, indent=2, ensure_ascii=False)


__all__ = [
    "EXIT_FAILURE",
    "EXIT_NON_ADMISSIBLE",
    "EXIT_OK",
    "EXIT_PARSE",
    "EXIT_UNSUPPORTED",
    "REPORT_SCHEMA",
    "Report",
    "exit_code_for",
]
