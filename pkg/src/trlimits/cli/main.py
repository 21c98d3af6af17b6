"""Command-line entry point: ``trlimits <command> ...`` prints or writes a JSON report."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import replace
from typing import Any, Optional, Sequence

from trlimits import __version__
from trlimits.algebra import parse_scalar
from trlimits.errors import ConfigurationError, ParseError, TRLimitsError
from trlimits.families import METHODS
from trlimits.runtime.settings import EngineSettings
from trlimits.runtime.telemetry import record_event

from .commands import (
    LOGGER_NAME,
    TypeWindow,
    analyze_polygon,
    check_curve,
    compute_correlators,
    family_limit,
    parse_point_list,
)
from .report import EXIT_OK, Report

BACKENDS = ("exact", "numeric")


def _env_int(key: str, fallback: int) -> int:
    try:
        return int(os.environ.get(key, fallback))
    except ValueError:
        return fallback


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise ConfigurationError(f"cannot read {path}: {exc.strerror}") from exc


def _rational(text: str | None) -> Any:
    if text is None:
        return None
    return parse_scalar(text)


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", dest="json_path", help="Write the report to this path instead of stdout")
    parser.add_argument(
        "--timing",
        action="store_true",
        default=os.environ.get("TRLIMITS_REPORT_TIMING", "") not in ("", "0"),
        help="Include wall-clock timings (the report is then no longer reproducible byte for byte)",
    )


def _window(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--bound",
        type=int,
        default=_env_int("TRLIMITS_BOUND", 1),
        help="Compute every omega_{g,n} with 2g-2+n up to this value (default: 1)",
    )
    parser.add_argument("--gmax", type=int, default=None, help="Largest genus to compute")
    parser.add_argument("--nmax", type=int, default=None, help="Largest number of points to compute")


def _parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="trlimits", description="Topological recursion on genus-0 spectral curves."
    )
    parser.add_argument("--version", action="version", version=f"trlimits {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check-curve", help="Ramification, admissibility and globalisation verdicts")
    check.add_argument("spec", help="Curve spec or local-data JSON ('-' for stdin)")
    check.add_argument("--t", help="Rational value of the parameter t")
    _common(check)

    correlators = commands.add_parser("correlators", help="Compute the correlators of a curve")
    correlators.add_argument("spec", help="Curve spec JSON ('-' for stdin)")
    correlators.add_argument(
        "--backend", choices=BACKENDS, default="exact", help="Exact arithmetic or contour quadrature"
    )
    correlators.add_argument(
        "--precision",
        type=int,
        default=_env_int("TRLIMITS_PRECISION", 30),
        help="Working digits of the numeric backend (default: 30)",
    )
    correlators.add_argument("--force", action="store_true", help="Run on a non-admissible curve, output uncertified")
    correlators.add_argument("--t", help="Rational value of the parameter t")
    _window(correlators)
    _common(correlators)

    polygon = commands.add_parser("analyze-polygon", help="Newton polygon, corners, deformations, admissibility")
    source = polygon.add_mutually_exclusive_group(required=True)
    source.add_argument("--polynomial", help="A polynomial in x and y")
    source.add_argument("--points", help="Support as 'i,j i,j ...' or a JSON list of pairs")
    source.add_argument("--file", help="JSON file with 'polynomial' or 'points'")
    polygon.add_argument("--svg", dest="svg_path", help="Also write an SVG drawing of the polygon")
    _common(polygon)

    family = commands.add_parser("family-limit", help="Correlators over a family and their limits at t = 0")
    family.add_argument("spec", help="Family spec JSON ('-' for stdin)")
    family.add_argument("--method", choices=METHODS, default="auto", help="How to get coefficients in Q(t)")
    _window(family)
    _common(family)
    return parser.parse_args(argv)


def _polygon_inputs(args: argparse.Namespace) -> dict[str, Any]:
    if args.polynomial is not None:
        return {"polynomial": args.polynomial, "source": "--polynomial"}
    if args.points is not None:
        return {"points": parse_point_list(args.points, source="--points"), "source": "--points"}
    text = _read(args.file)
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source=args.file, line=exc.lineno, column=exc.colno) from exc
    if isinstance(document, dict) and isinstance(document.get("polynomial"), str):
        return {"polynomial": document["polynomial"], "source": args.file}
    if isinstance(document, dict) and "points" in document:
        return {"points": parse_point_list(json.dumps(document["points"]), source=args.file), "source": args.file}
    raise ParseError("expected 'polynomial' or 'points'", source=args.file)


def _echo(args: argparse.Namespace) -> dict[str, Any]:
    hidden = {"command", "timing", "json_path"}
    return {key: value for key, value in sorted(vars(args).items()) if key not in hidden}


def run(args: argparse.Namespace) -> tuple[Report, int]:
    started = time.perf_counter()
    report = Report(args.command, _echo(args))
    code = EXIT_OK
    try:
        if args.command == "check-curve":
            report = check_curve(_read(args.spec), source=args.spec, t=_rational(args.t))
        elif args.command == "correlators":
            settings = EngineSettings.from_env()
            if args.backend == "numeric":
                settings = replace(settings, digits=args.precision)
            report = compute_correlators(
                _read(args.spec),
                source=args.spec,
                window=TypeWindow(args.bound, args.gmax, args.nmax),
                backend=args.backend,
                force=args.force,
                t=_rational(args.t),
                settings=settings,
            )
        elif args.command == "analyze-polygon":
            report = analyze_polygon(**_polygon_inputs(args), svg_path=args.svg_path)
        else:
            report = family_limit(
                _read(args.spec),
                source=args.spec,
                window=TypeWindow(args.bound, args.gmax, args.nmax),
                method=args.method,
            )
    except (TRLimitsError, ValueError) as exc:
        code = report.fail(exc)
        record_event(
            "cli.failed",
            level="warning",
            data={"command": args.command, "error": type(exc).__name__, "exit": code},
            logger_name=LOGGER_NAME,
        )
    report.timing["total"] = time.perf_counter() - started
    return report, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parse_args(argv)
    report, code = run(args)
    text = report.to_json(include_timing=args.timing)
    if args.json_path:
        with open(args.json_path, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":  # pragma: no cover - manual entry
    sys.exit(main())
