"""Self-consistency checks on computed correlators.

All checks run exactly on the engine's prepared curve so every scalar lives in
one number field. Loop-equation and comb checks pin the spectators at rational
points away from ramification and poles; the running point stays symbolic as a
series in the standard chart of the probe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Iterable, TypeVar

from trlimits.algebra.rational import is_infinity
from trlimits.curve.local import RamPoint
from trlimits.curve.model import SpectralCurve
from trlimits.errors import DomainError, InsufficientPrecisionError
from trlimits.runtime.settings import EngineSettings
from trlimits.runtime.telemetry import record_event, span
from trlimits.series import LaurentSeries

from .assembly import Assembler, PinnedSpectator
from .basis import BasisLabel, Sheet, sort_labels
from .correlator import Correlator, correlators_agree
from .engine import LOGGER_NAME, TopologicalRecursion, stable_types
from .sheets import GroupSheets, point_group

T = TypeVar("T")

_CANDIDATES = tuple(Fraction(p, q) for q in (7, 11, 13, 17, 19, 23) for p in (2, -3, 5, -9))


# -- helpers ----------------------------------------------------------------


def _widening(engine: TopologicalRecursion, start: int, compute: Callable[[int], T]) -> T:
    settings = engine.settings
    terms = start
    for _ in range(settings.max_widenings + 1):
        try:
            return compute(terms)
        except InsufficientPrecisionError:
            terms += settings.widen_step
    return compute(terms)


def default_spectators(engine: TopologicalRecursion, count: int) -> list[PinnedSpectator]:
    """``count`` exact points, spread over the components, avoiding special points."""

    curve = engine.curve
    special = {(p.component, p.location) for p in engine.points}
    chosen: list[PinnedSpectator] = []
    candidates = iter(_CANDIDATES)
    while len(chosen) < count:
        component = len(chosen) % len(curve.components)
        comp = curve.components[component]
        for value in candidates:
            if (component, value) in special:
                continue
            if comp.dx(value) == 0:
                continue
            if is_infinity(comp.x(value)) or is_infinity(comp.y(value)):
                continue
            if any(s.component == component and s.value == value for s in chosen):
                continue
            chosen.append(PinnedSpectator(component, value))
            break
        else:
            raise DomainError("no admissible spectator point among the candidates")
    return chosen


def _probe_sheets(engine: TopologicalRecursion, probe: RamPoint, terms: int) -> GroupSheets:
    return point_group(engine.curve, probe, terms).sheets(engine.curve, terms)


def _contributing(engine: TopologicalRecursion) -> list[RamPoint]:
    return [p for p in engine.points if p.contributes]


def _sum(parts: Iterable[LaurentSeries]) -> LaurentSeries:
    total = LaurentSeries.zero()
    for part in parts:
        total = total + part
    return total


def _scalar(expansion: dict[Any, LaurentSeries]) -> LaurentSeries:
    return expansion.get((), LaurentSeries.zero())


# -- projection property ------------------------------------------------------


@dataclass(frozen=True)
class ProjectionReport:
    g: int
    n: int
    holds: bool
    mismatches: tuple[tuple[tuple[BasisLabel, ...], Any, Any], ...] = ()

    def describe(self) -> dict[str, Any]:
        return {
            "g": self.g,
            "n": self.n,
            "holds": self.holds,
            "mismatches": [
                {"labels": [label.text() for label in labels], "expected": str(a), "found": str(b)}
                for labels, a, b in self.mismatches
            ],
        }


def _local_sheet(point: RamPoint, terms: int) -> Sheet:
    """The local coordinate itself as a sheet: ``u = w - a`` (``1/w`` at infinity)."""

    return Sheet(0, point.component, point.location, LaurentSeries.monomial(1), LaurentSeries.zero(), terms=terms)


def projection_of(engine: TopologicalRecursion, omega: Correlator) -> Correlator:
    """Sum over contributing points of ``Res alpha_{0,2}(w_0, .) omega(., w_1, ...)``."""

    order_bound = max((label.order for label in omega.labels()), default=2)
    terms = order_bound + 2
    coeffs: dict[tuple[BasisLabel, ...], Any] = {}
    for point in _contributing(engine):
        sheet = _local_sheet(point, terms)
        grouped: dict[tuple[BasisLabel, ...], LaurentSeries] = {}
        for labels, value in omega.coeffs.items():
            form = sheet.form(labels[0])
            if form is None:
                continue
            term = form.scale(value)
            rest = labels[1:]
            grouped[rest] = grouped[rest] + term if rest in grouped else term
        for rest, series in grouped.items():
            if series.is_exact_zero():
                continue
            order = 2
            while -order >= series.lo:
                value = series.coefficient(-order) * sheet.sign
                if value != 0:
                    key = (sheet.label(order), *rest)
                    coeffs[key] = coeffs.get(key, 0) + value
                order += 1
    return Correlator(omega.g, omega.n, coeffs, certified=omega.certified, mode=omega.mode)


def check_projection_property(engine: TopologicalRecursion, omega: Correlator) -> ProjectionReport:
    """Whether ``omega`` equals its projection onto the contributing points."""

    projected = projection_of(engine, omega)
    mismatches = []
    for labels in sorted(set(omega.coeffs) | set(projected.coeffs), key=sort_labels):
        a, b = projected.coefficient(labels), omega.coefficient(labels)
        if a != b:
            mismatches.append((labels, a, b))
    return ProjectionReport(omega.g, omega.n, not mismatches, tuple(mismatches))


# -- loop equations ---------------------------------------------------------------


def pole_allowance(source: RamPoint, i: int) -> int | None:
    """``d(i) = i - 1 - floor(s (i - 1) / r)`` at the source point; ``None`` means minus infinity."""

    if i == 1:
        return 0
    if source.s is None:
        raise DomainError("local data not filled")
    if source.s == math.inf:
        return None
    return i - 1 - math.floor(Fraction(source.s * (i - 1), source.r))


@dataclass(frozen=True)
class LoopEquationEntry:
    i: int
    observed: int | None
    allowed: int | None
    congruent: bool

    @property
    def ok(self) -> bool:
        if not self.congruent:
            return False
        if self.observed is None:
            return True
        return self.allowed is not None and self.observed <= self.allowed


@dataclass(frozen=True)
class LoopEquationReport:
    """Pole orders of ``E_{g,i;n}`` in the probe's chart against the allowance."""

    g: int
    n: int
    probe: RamPoint
    source: RamPoint
    entries: tuple[LoopEquationEntry, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(entry.ok for entry in self.entries)

    def describe(self) -> dict[str, Any]:
        return {
            "g": self.g,
            "n": self.n,
            "probe": self.probe.describe(),
            "source": self.source.describe(),
            "ok": self.ok,
            "entries": [
                {
                    "i": e.i,
                    "observed": e.observed,
                    "allowed": e.allowed,
                    "congruent": e.congruent,
                    "ok": e.ok,
                }
                for e in self.entries
            ],
        }


def loop_sums(
    engine: TopologicalRecursion,
    g: int,
    n: int,
    probe: RamPoint,
    spectators: list[PinnedSpectator],
    terms: int,
) -> list[LaurentSeries]:
    """``E_{g,i;n}`` for ``i = 1..r`` as series of ``dzeta**i`` coefficients at ``probe``."""

    entry = _probe_sheets(engine, probe, terms)
    assembler = Assembler(engine.store, x_derivative=entry.group.x_derivative(), pinned=spectators)
    sheets = list(entry.sheets)
    sums = []
    for i in range(1, len(sheets) + 1):
        parts = []
        for subset in combinations(sheets, i):
            expansion = assembler.combination(g, list(subset), n, cutoff=math.inf, disks=True)
            parts.append(_scalar(expansion))
        sums.append(_sum(parts))
    return sums


def check_loop_equations(
    engine: TopologicalRecursion,
    g: int,
    n: int,
    probe: RamPoint,
    source: RamPoint | None = None,
    *,
    spectators: list[PinnedSpectator] | None = None,
) -> LoopEquationReport:
    """Pole bounds and pushforward congruences of ``E_{g,i;n}`` at ``probe``.

    ``E_{g,i;n}`` sums ``W_{g,i,n}`` over all ``i``-subsets of the fibre through
    the running point. It needs ``omega_{g,1+n}`` and everything below.
    """

    source = source or probe
    engine.correlator(g, 1 + n)
    spectators = spectators if spectators is not None else default_spectators(engine, n)
    r = probe.r

    def compute(terms: int) -> list[LoopEquationEntry]:
        entries = []
        for i, series in enumerate(loop_sums(engine, g, n, probe, spectators, terms), start=1):
            allowed = r * d - (r - 1) * i if (d := pole_allowance(source, i)) is not None else None
            if allowed is not None and series.hi < -allowed - 1:
                raise InsufficientPrecisionError(
                    "loop sum window ends below the allowance", needed=-allowed - 1, known=int(series.hi)
                )
            known = list(series.items())
            observed = -known[0][0] if known else None
            congruent = all((exponent + i) % r == 0 for exponent, _ in known)
            entries.append(LoopEquationEntry(i, observed, allowed, congruent))
        return entries

    with span("checks::loop_equations", logger_name=LOGGER_NAME, metadata={"g": g, "n": n}):
        entries = _widening(engine, engine.initial_window(g, 1 + n), compute)
    report = LoopEquationReport(g, n, probe, source, tuple(entries))
    if not report.ok:
        record_event("checks.loop_equations_failed", level="warning", data=report.describe(), logger_name=LOGGER_NAME)
    return report


# -- comb identity ----------------------------------------------------------------


def check_comb_identity(
    engine: TopologicalRecursion,
    g: int,
    n: int,
    point: RamPoint,
    *,
    spectators: list[PinnedSpectator] | None = None,
) -> bool:
    """``sum_i (-omega01(z))**(r-i) E_i(z)`` against the ``W'`` expansion over the deck sheets."""

    engine.correlator(g, 1 + n)
    spectators = spectators if spectators is not None else default_spectators(engine, n)

    def compute(terms: int) -> bool:
        entry = _probe_sheets(engine, point, terms)
        x_derivative = entry.group.x_derivative()
        sums = loop_sums(engine, g, n, point, spectators, terms)
        sheets = list(entry.sheets)
        base, others = sheets[0], sheets[1:]
        disk = {s.index: s.y * x_derivative for s in sheets}
        r = len(sheets)
        left = _sum((-disk[base.index]) ** (r - i) * e for i, e in enumerate(sums, start=1))
        assembler = Assembler(engine.store, x_derivative=x_derivative, pinned=spectators)
        parts = []
        for size in range(0, len(others) + 1):
            for subset in combinations(others, size):
                inside = {s.index for s in subset}
                w_prime = _scalar(assembler.combination(g, [base, *subset], n, cutoff=math.inf))
                for sheet in others:
                    if sheet.index not in inside:
                        w_prime = w_prime * (disk[sheet.index] - disk[base.index])
                parts.append(w_prime)
        return left.agrees_with(_sum(parts))

    with span("checks::comb_identity", logger_name=LOGGER_NAME, metadata={"g": g, "n": n}):
        return _widening(engine, engine.initial_window(g, 1 + n), compute)


# -- engine comparisons --------------------------------------------------------


def _all_agree(a: dict[tuple[int, int], Correlator], b: dict[tuple[int, int], Correlator]) -> bool:
    return a.keys() == b.keys() and all(correlators_agree(a[key], b[key]) for key in a)


def check_primitive_independence(
    curve: SpectralCurve,
    bound: int,
    *,
    constant: Any = 1,
    settings: EngineSettings | None = None,
) -> bool:
    """Shifting the primitive of ``omega_{0,2}`` by a constant leaves every correlator unchanged."""

    settings = settings or EngineSettings.from_env()
    plain = TopologicalRecursion(curve, settings=settings).correlators(bound)
    shifted = TopologicalRecursion(curve, settings=settings, primitive_constant=constant).correlators(bound)
    return _all_agree(plain, shifted)


def check_skip_rule(curve: SpectralCurve, bound: int, *, settings: EngineSettings | None = None) -> bool:
    """Residues at points with ``s_bar < 0`` contribute nothing."""

    settings = settings or EngineSettings.from_env()
    skipped = TopologicalRecursion(curve, settings=settings).correlators(bound)
    full = TopologicalRecursion(curve, settings=settings, include_noncontributing=True).correlators(bound)
    return _all_agree(skipped, full)


@dataclass(frozen=True)
class ModeComparison:
    """The same correlators computed with two residue groupings."""

    curve: str
    modes: tuple[str, str]
    agreement: dict[tuple[int, int], bool]

    @property
    def agree(self) -> bool:
        return all(self.agreement.values())

    def describe(self) -> dict[str, Any]:
        return {
            "curve": self.curve,
            "modes": list(self.modes),
            "agree": self.agree,
            "types": {f"{g},{n}": same for (g, n), same in sorted(self.agreement.items())},
        }


def compare_modes(
    curve: SpectralCurve,
    bound: int,
    *,
    modes: tuple[str, str] = ("point", "fiber"),
    settings: EngineSettings | None = None,
) -> ModeComparison:
    """Run the recursion with two groupings and record where the outputs differ.

    Nothing is asserted: for some admissible fibres the two are not known to agree.
    """

    settings = settings or EngineSettings.from_env()
    first, second = (TopologicalRecursion(curve, mode=mode, settings=settings) for mode in modes)
    agreement = {
        (g, n): correlators_agree(first.correlator(g, n), second.correlator(g, n)) for g, n in stable_types(bound)
    }
    comparison = ModeComparison(curve.name, modes, agreement)
    if not comparison.agree:
        record_event(
            "checks.mode_discrepancy",
            level="warning",
            data={"curve": curve.name, "modes": modes, "differ": [k for k, v in agreement.items() if not v]},
            logger_name=LOGGER_NAME,
        )
    return comparison


# -- aggregate ----------------------------------------------------------------


@dataclass
class SelfCheckReport:
    curve: str
    bound: int
    results: dict[str, bool] = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def record(self, name: str, passed: bool) -> None:
        self.results[name] = passed
        if not passed:
            self.failures.append(name)

    def describe(self) -> dict[str, Any]:
        return {"curve": self.curve, "bound": self.bound, "ok": self.ok, "results": dict(self.results)}


def self_check(engine: TopologicalRecursion, bound: int) -> SelfCheckReport:
    """Symmetry, residue-freeness, projection, loop equations and comb identity up to ``bound``."""

    report = SelfCheckReport(engine.curve.name, bound)
    with span("checks::self_check", logger_name=LOGGER_NAME, metadata={"curve": engine.curve.name, "bound": bound}):
        for g, n in stable_types(bound):
            omega = engine.correlator(g, n)
            tag = f"omega_{g},{n}"
            report.record(f"{tag}:symmetric", omega.is_symmetric())
            report.record(f"{tag}:residue_free", omega.is_residue_free())
            report.record(f"{tag}:projection", check_projection_property(engine, omega).holds)
            for point in _contributing(engine):
                where = point.describe()["location"]
                report.record(f"{tag}:loop@{where}", check_loop_equations(engine, g, n - 1, point).ok)
                report.record(f"{tag}:comb@{where}", check_comb_identity(engine, g, n - 1, point))
    if report.failures:
        record_event(
            "checks.self_check_failed",
            level="warning",
            data={"curve": engine.curve.name, "failures": report.failures},
            logger_name=LOGGER_NAME,
        )
    return report


__all__ = [
    "LoopEquationEntry",
    "LoopEquationReport",
    "ModeComparison",
    "ProjectionReport",
    "SelfCheckReport",
    "check_comb_identity",
    "check_loop_equations",
    "check_primitive_independence",
    "check_projection_property",
    "check_skip_rule",
    "compare_modes",
    "default_spectators",
    "loop_sums",
    "pole_allowance",
    "projection_of",
    "self_check",
]
