"""The four commands behind ``trlimits``; each one fills a :class:`Report`."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from trlimits.algebra import parse_expression
from trlimits.curve import (
    SpectralCurve,
    curve_from_spec,
    find_ramification,
    local_admissibility_report,
    prepare_curve,
    with_local_data,
)
from trlimits.errors import DomainError, FiberInvalidError, ParseError
from trlimits.families import (
    DEFAULT_SAMPLES,
    FamilyRecursion,
    expected_profile,
    family_from_spec,
    ramification_profile,
)
from trlimits.globalization import FiberVerdict, branch_fibers, fiber_globalisable, fibers_from_json
from trlimits.polygon import (
    LatticePolygon,
    check_nondegenerate,
    gamma_admissibility,
    newton_polygon,
    polygon_report,
    polygon_svg,
    rs_delta_max,
)
from trlimits.recursion import ContourRecursion, Correlator, TopologicalRecursion, stable_types
from trlimits.runtime.settings import EngineSettings
from trlimits.runtime.telemetry import record_event, span

from .report import Report

LOGGER_NAME = "trlimits.cli"

LOCAL_PREDICATE = "local admissibility (lA1, lA2) at every contributing ramification point"
FIBRE_PREDICATE = "pairwise C-i/C-ii with non-resonance inside each fibre of x"
GAMMA_PREDICATE = "Gamma-admissibility of the Newton polygon (GA1, GA2, GA3)"
LIMIT_PREDICATE = "t-adic valuation of omega_{g,n} compared with the recursion on the central curve"


@dataclass(frozen=True, slots=True)
class TypeWindow:
    """The ``(g, n)`` a command computes: ``2g - 2 + n <= bound`` capped by ``gmax``/``nmax``."""

    bound: int = 1
    gmax: int | None = None
    nmax: int | None = None

    def types(self) -> list[tuple[int, int]]:
        return [
            (g, n)
            for g, n in stable_types(self.bound)
            if (self.gmax is None or g <= self.gmax) and (self.nmax is None or n <= self.nmax)
        ]

    def describe(self) -> dict[str, Any]:
        return {"bound": self.bound, "gmax": self.gmax, "nmax": self.nmax}


def _load_json(text: str, source: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source=source, line=exc.lineno, column=exc.colno) from exc


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def _fibre_verdicts(report: Report, verdicts: Iterable[FiberVerdict]) -> None:
    rows = [verdict.describe() for verdict in verdicts]
    report.payload["fibers"] = rows
    for row in rows:
        report.verdict(f"globalisable above {row['base']}", row["globalisable"], FIBRE_PREDICATE)


# -- check-curve ------------------------------------------------------------


def check_curve(text: str, *, source: str, t: Any = None) -> Report:
    """Ramification table, fibre verdicts and the polygon verdict of a curve spec.

    A document holding ``"fibers"`` (or a bare list) is read as local data and
    only the fibre verdicts are produced.
    """

    report = Report("check-curve", {"source": source, "t": None if t is None else str(t)})
    document = _load_json(text, source)
    with span("cli::check_curve", logger_name=LOGGER_NAME, metadata={"source": source}):
        if isinstance(document, list) or (isinstance(document, Mapping) and "fibers" in document):
            fibers = fibers_from_json(document, source=source)
            _fibre_verdicts(report, (fiber_globalisable(fiber) for fiber in fibers))
            return report

        curve_input = curve_from_spec(document, t=t, source=source)
        construction = curve_input.construction
        if construction is not None:
            gamma = gamma_admissibility(construction.polygon)
            report.payload["polynomial"] = construction.describe()
            report.payload["gamma_admissibility"] = gamma.describe()
            report.verdict("gamma_admissible", _yes_no(gamma.admissible), GAMMA_PREDICATE)

        curve = curve_input.require()
        report.payload["curve"] = curve.describe()
        prepared = prepare_curve(curve, fibers=True)
        rows = []
        failed: set[str] = set()
        for point, verdict in local_admissibility_report(with_local_data(prepared, find_ramification(prepared))):
            row = point.describe()
            row.update(admissible=verdict.admissible, clause=verdict.clause, reason=verdict.reason)
            rows.append(row)
            if point.contributes and not verdict:
                failed.add(verdict.clause or "lA2")
        report.payload["ramification"] = rows
        local = "yes" if not failed else f"no ({', '.join(sorted(failed))})"
        report.verdict("locally_admissible", local, LOCAL_PREDICATE)
        _fibre_verdicts(report, (fiber_globalisable(fiber) for fiber in branch_fibers(prepared)))
    return report


# -- correlators ------------------------------------------------------------


def _engine_for(
    curve: SpectralCurve, *, backend: str, force: bool, settings: EngineSettings
) -> tuple[TopologicalRecursion, ContourRecursion | None]:
    if backend == "numeric":
        numeric = ContourRecursion(curve, force=force, settings=settings)
        return numeric.frame, numeric
    return TopologicalRecursion(curve, force=force, settings=settings), None


def compute_correlators(
    text: str,
    *,
    source: str,
    window: TypeWindow,
    backend: str = "exact",
    force: bool = False,
    t: Any = None,
    settings: EngineSettings | None = None,
) -> Report:
    settings = settings or EngineSettings.from_env()
    report = Report(
        "correlators",
        {
            "source": source,
            "t": None if t is None else str(t),
            "window": window.describe(),
            "force": force,
            "precision": settings.digits if backend == "numeric" else None,
        },
        backend=backend,
    )
    curve = curve_from_spec(_load_json(text, source), t=t, source=source).require()
    frame, numeric = _engine_for(curve, backend=backend, force=force, settings=settings)
    report.payload["curve"] = frame.curve.describe()
    report.verdict("certified", _yes_no(frame.certified), LOCAL_PREDICATE)
    if frame.violations:
        report.payload["violations"] = [
            {"point": point.describe(), "clause": clause} for point, clause in frame.violations
        ]

    computed: dict[str, Any] = {}
    asymmetric = []
    for g, n in window.types():
        with span("cli::correlator", logger_name=LOGGER_NAME, metadata={"g": g, "n": n}) as handle:
            correlator: Correlator = (numeric or frame).correlator(g, n)
        report.timing[f"omega_{g}_{n}"] = handle.elapsed()
        entry = correlator.describe()
        if numeric is not None:
            error = numeric.errors.get((g, n))
            entry["error_estimate"] = None if error is None else str(error)
        computed[f"{g},{n}"] = entry
        if not entry["symmetric"]:
            asymmetric.append(f"{g},{n}")
    report.payload["correlators"] = computed
    symmetric = "yes" if not asymmetric else f"no ({'; '.join(asymmetric)})"
    report.verdict("symmetric", symmetric, "symmetry of the computed tensors")
    record_event(
        "cli.correlators",
        data={"curve": curve.name, "types": len(computed), "backend": backend, "certified": frame.certified},
        logger_name=LOGGER_NAME,
    )
    return report


# -- analyze-polygon --------------------------------------------------------


def _points_from(raw: Any, source: str) -> list[tuple[int, int]]:
    if not isinstance(raw, list):
        raise ParseError("'points' must be a list of [i, j] pairs", source=source)
    points = []
    for entry in raw:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ParseError(f"not an [i, j] pair: {entry!r}", source=source)
        try:
            points.append((int(entry[0]), int(entry[1])))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"non-integer exponent in {entry!r}", source=source) from exc
    if not points:
        raise ParseError("the support is empty", source=source)
    return points


def parse_point_list(text: str, *, source: str = "<points>") -> list[tuple[int, int]]:
    """``"0,0 2,3 1,1"`` or a JSON list of pairs."""

    stripped = text.strip()
    if stripped.startswith("["):
        return _points_from(_load_json(stripped, source), source)
    pairs = []
    for chunk in stripped.split():
        parts = chunk.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected i,j but got {chunk!r}", source=source)
        pairs.append(parts)
    return _points_from(pairs, source)


def _diagonal_type(polygon: LatticePolygon) -> tuple[int, int] | None:
    """``(r, s)`` when the polygon is the diagonal of ``x^(r-s) y^r - 1``."""

    if polygon.dimension != 1:
        return None
    start, end = sorted(polygon.vertices)
    if tuple(start) != (0, 0) or not 0 < end.i < end.j:
        return None
    return end.j, end.j - end.i


def analyze_polygon(
    *,
    polynomial: str | None = None,
    points: list[tuple[int, int]] | None = None,
    source: str = "<polygon>",
    svg_path: str | None = None,
) -> Report:
    report = Report("analyze-polygon", {"source": source, "polynomial": polynomial, "points": points})
    expr = None
    if polynomial is not None:
        expr = parse_expression(polynomial, ["x", "y"], source=source)
        try:
            polygon = newton_polygon(expr)
        except DomainError as exc:
            raise ParseError(str(exc), source=source) from exc
    elif points is not None:
        polygon = LatticePolygon.from_points(points)
    else:
        raise ParseError("give a polynomial or a point list", source=source)

    with span("cli::analyze_polygon", logger_name=LOGGER_NAME, metadata={"source": source}):
        summary = polygon_report(polygon)
        report.payload["polygon"] = summary
        gamma = summary.get("gamma_admissibility")
        if gamma is not None:
            report.verdict("gamma_admissible", _yes_no(gamma["admissible"]), GAMMA_PREDICATE)
        if expr is not None:
            report.verdict("nondegenerate", _yes_no(check_nondegenerate(expr)), "edge polynomials are square-free")
        diagonal = _diagonal_type(polygon)
        if diagonal is not None:
            try:
                report.payload["rs_delta_max"] = rs_delta_max(*diagonal).describe()
            except DomainError as exc:
                report.payload["rs_delta_max"] = None
                summary["notes"].append(str(exc))
        if svg_path is not None:
            with open(svg_path, "w", encoding="utf-8") as handle:
                handle.write(polygon_svg(polygon, title=polynomial or source))
            report.payload["svg"] = svg_path
    return report


# -- family-limit -----------------------------------------------------------


def family_limit(
    text: str,
    *,
    source: str,
    window: TypeWindow,
    method: str = "auto",
    settings: EngineSettings | None = None,
) -> Report:
    """Correlators over ``Q(t)``, their limits at ``t = 0`` and the central comparison."""

    settings = settings or EngineSettings.from_env()
    family = family_from_spec(_load_json(text, source), source=source)
    report = Report("family-limit", {"source": source, "window": window.describe(), "method": method})
    report.payload["family"] = family.describe()
    if family.depends_on_t() and all(family.bad_set.contains(value) for value in DEFAULT_SAMPLES):
        raise FiberInvalidError(f"every sampled member of {family.name} lies in the bad set")

    recursion = FamilyRecursion(family, method=method, settings=settings)
    report.payload["method"] = recursion.resolved_method()
    profile = ramification_profile(family)
    report.payload["profile"] = profile.describe()
    if family.r is not None and family.s is not None:
        expected = expected_profile(family.r, family.s)
        report.payload["expected_profile"] = (
            None if expected is None else sorted([*key, count] for key, count in expected.items())
        )

    correlators: dict[str, Any] = {}
    limits: dict[str, Any] = {}
    matches: list[bool | None] = []
    for g, n in window.types():
        with span("cli::family_correlator", logger_name=LOGGER_NAME, metadata={"g": g, "n": n}) as handle:
            correlators[f"{g},{n}"] = recursion.correlator(g, n).describe()
            limit = recursion.limit(g, n)
        report.timing[f"omega_{g}_{n}"] = handle.elapsed()
        limits[f"{g},{n}"] = limit.describe()
        report.verdict(f"limit {g},{n}", limit.verdict(), LIMIT_PREDICATE)
        matches.append(limit.matches_central if limit.valuation is not None else None)
    report.payload["correlators"] = correlators
    report.payload["limits"] = limits
    if any(m is None for m in matches):
        commutes = "undetermined"
    else:
        commutes = _yes_no(all(matches))
    report.verdict("commutes with the limit", commutes, LIMIT_PREDICATE)
    record_event(
        "cli.family_limit",
        data={"family": family.name, "types": len(limits), "commutes": commutes},
        logger_name=LOGGER_NAME,
    )
    return report


__all__ = [
    "LOGGER_NAME",
    "TypeWindow",
    "analyze_polygon",
    "check_curve",
    "compute_correlators",
    "family_limit",
    "parse_point_list",
]
