"""The exact topological-recursion driver.

``TopologicalRecursion`` computes ``omega_{g,n}`` for increasing ``2g - 2 + n``.
Each step sums, over the residue groups of the chosen mode, over every base
sheet of a group member and every non-empty subset ``Z`` of the other sheets,
the residue of

    -alpha(w_0; z) W'_{g,1+|Z|,n}(z, Z; w) / (prod_{z' in Z} (y(z') - y(z)) dx(z)^|Z|)

in the group coordinate, against the canonical primitive ``alpha`` of
``omega_{0,2}`` from the member. The coefficient of ``alpha`` on the basis form
of order ``k`` at the member is ``u**(k - 1)`` (``-u**(k - 1)`` at infinity), so
every residue lands directly in the pole basis.

Series windows start at ``settings.series_order`` and widen whenever a residue
needs a coefficient that is not known yet.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Iterable, Mapping

from trlimits.algebra.rational import as_scalar, divide
from trlimits.curve.admissibility import local_admissibility_report
from trlimits.curve.local import RamPoint, with_local_data
from trlimits.curve.model import SpectralCurve
from trlimits.curve.ramification import find_ramification, prepare_curve
from trlimits.errors import (
    DomainError,
    InsufficientPrecisionError,
    InternalEngineError,
    NonAdmissibleError,
)
from trlimits.runtime.settings import EngineSettings
from trlimits.runtime.telemetry import record_event, span
from trlimits.series import LaurentSeries

from .assembly import Assembler, spectator_labels
from .basis import BasisLabel, Sheet
from .correlator import Correlator
from .sheets import MODES, GroupSheets, Mode, ResidueGroup, build_groups

LOGGER_NAME = "trlimits.recursion"


def stable_types(bound: int) -> list[tuple[int, int]]:
    """Every ``(g, n)`` with ``n >= 1`` and ``0 < 2g - 2 + n <= bound``, by ``2g - 2 + n``."""

    found = []
    for chi in range(1, bound + 1):
        for g in range(0, (chi + 2) // 2 + 1):
            n = chi + 2 - 2 * g
            if n >= 1:
                found.append((g, n))
    return found


def residue_of_product(a: LaurentSeries, b: LaurentSeries) -> Any:
    """Coefficient of ``u**-1`` in ``a * b`` without forming the product."""

    if a.is_exact_zero() or b.is_exact_zero():
        return Fraction(0)
    total: Any = Fraction(0)
    for exponent in range(a.lo, -b.lo):
        coeff = a.coefficient(exponent)
        if coeff != 0:
            other = b.coefficient(-1 - exponent)
            if other != 0:
                total = total + coeff * other
    return total


@dataclass
class StepReport:
    g: int
    n: int
    terms: int
    widenings: int
    elapsed: float = 0.0


@dataclass
class TopologicalRecursion:
    """Exact recursion on a genus-0 curve.

    ``mode`` chooses the residue groups: ``"point"`` is the local recursion,
    ``"disc"`` groups the ramification points over a branch value and
    ``"fiber"`` takes every point of each branch fibre (vertical
    globalisation). ``force`` runs on curves failing local admissibility and
    marks the output as not certified. ``include_noncontributing`` also takes
    residues at points with ``s_bar < 0``. ``primitive_constant`` adds a
    constant to the primitive of ``omega_{0,2}`` on the order-2 basis form.
    """

    curve: SpectralCurve
    mode: Mode = "point"
    force: bool = False
    settings: EngineSettings = field(default_factory=EngineSettings.from_env)
    include_noncontributing: bool = False
    primitive_constant: Any = 0
    points: list[RamPoint] = field(init=False)
    certified: bool = field(init=False, default=True)
    violations: list[tuple[RamPoint, str]] = field(init=False, default_factory=list)
    reports: list[StepReport] = field(init=False, default_factory=list)
    _store: dict[tuple[int, int], Correlator] = field(init=False, default_factory=dict)
    _terms: int = field(init=False, default=0)
    _groups: dict[int, list[GroupSheets]] = field(init=False, default_factory=dict)

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}; expected one of {MODES}")
        self.primitive_constant = as_scalar(self.primitive_constant)
        with span("recursion::prepare", logger_name=LOGGER_NAME, metadata={"curve": self.curve.name}):
            self.curve = prepare_curve(
                self.curve,
                fibers=self.mode != "point",
                contributing_only=self.mode == "point" and not self.include_noncontributing,
            )
            self.points = with_local_data(self.curve, find_ramification(self.curve))
        for point, verdict in local_admissibility_report(self.points):
            if point.contributes and not verdict:
                self.violations.append((point, verdict.clause or "lA2"))
        if self.violations:
            point, clause = self.violations[0]
            if not self.force:
                raise NonAdmissibleError(
                    f"{self.curve.name}: point {point.describe()['location']} fails {clause}; "
                    "pass force=True to run the recursion anyway",
                    point=point,
                    clause=clause,
                )
            self.certified = False
            record_event(
                "recursion.forced",
                level="warning",
                data={"curve": self.curve.name, "violations": [c for _, c in self.violations]},
                logger_name=LOGGER_NAME,
            )
        self._terms = self.settings.series_order

    # -- public API -------------------------------------------------------

    @property
    def store(self) -> Mapping[tuple[int, int], Correlator]:
        return dict(self._store)

    def correlator(self, g: int, n: int) -> Correlator:
        """``omega_{g,n}``, computing every lower correlator it depends on."""

        if (g, n) in self._store:
            return self._store[(g, n)]
        chi = 2 * g - 2 + n
        if chi <= 0 or n < 1:
            raise DomainError(f"omega_{g},{n} is not produced by the recursion")
        for gn in stable_types(chi):
            if gn not in self._store:
                self._store[gn] = self._step(*gn)
        return self._store[(g, n)]

    def correlators(self, bound: int) -> dict[tuple[int, int], Correlator]:
        """Every ``omega_{g,n}`` with ``2g - 2 + n <= bound``."""

        for gn in stable_types(bound):
            self.correlator(*gn)
        return {gn: self._store[gn] for gn in stable_types(bound)}

    def groups(self) -> list[ResidueGroup]:
        return [entry.group for entry in self._sheets(self._terms)]

    # -- one step ---------------------------------------------------------

    def initial_window(self, g: int, n: int) -> int:
        """Initial window: the pole-order bound 2(3g - 2 + n) + s_bar + r of the worst point."""

        bounds = [2 * (3 * g - 2 + n) + p.s_bar + p.r for p in self.points if p.contributes]
        return max([self.settings.series_order, *bounds])

    def _step(self, g: int, n: int) -> Correlator:
        widenings = 0
        self._terms = max(self._terms, self.initial_window(g, n))
        last: InsufficientPrecisionError | None = None
        with span(
            "recursion::step",
            logger_name=LOGGER_NAME,
            metadata={"curve": self.curve.name, "g": g, "n": n, "mode": self.mode},
        ) as handle:
            while widenings <= self.settings.max_widenings:
                try:
                    result = self._compute(g, n - 1, self._terms)
                    break
                except InsufficientPrecisionError as err:
                    last = err
                    widenings += 1
                    self._terms += self.settings.widen_step
                    record_event(
                        "recursion.precision_widened",
                        level="warning",
                        data={"g": g, "n": n, "terms": self._terms, "needed": err.needed},
                        logger_name=LOGGER_NAME,
                    )
            else:
                handle.fail(str(last))
                if last is not None and last.source == "kernel":
                    raise NonAdmissibleError(
                        f"{self.curve.name}: y(z') - y(z) vanishes identically between deck sheets",
                        clause="lA1",
                    ) from last
                raise last  # type: ignore[misc]
            if self.settings.confirm_precision:
                wider = self._compute(g, n - 1, self._terms + self.settings.widen_step)
                if not wider.same_as(result):
                    raise InternalEngineError(f"omega_{g},{n} changed under a wider window")
            if not result.is_symmetric():
                record_event(
                    "recursion.asymmetry_detected",
                    level="warning",
                    data={"curve": self.curve.name, "g": g, "n": n},
                    logger_name=LOGGER_NAME,
                )
            self.reports.append(StepReport(g, n, self._terms, widenings, handle.elapsed()))
            return result

    def _sheets(self, terms: int) -> list[GroupSheets]:
        if terms not in self._groups:
            groups = build_groups(
                self.curve,
                self.points,
                self.mode,
                terms=terms,
                include_noncontributing=self.include_noncontributing,
            )
            self._groups = {terms: [group.sheets(self.curve, terms) for group in groups]}
        return self._groups[terms]

    def _compute(self, g: int, n: int, terms: int) -> Correlator:
        """``omega_{g,1+n}`` at a fixed window."""

        coeffs: dict[tuple[BasisLabel, ...], Any] = {}
        for entry in self._sheets(terms):
            assembler = Assembler(self._store, x_derivative=entry.group.x_derivative())
            for base_index, _member in entry.bases:
                base = entry.sheets[base_index]
                others = [s for s in entry.sheets if s is not base]
                for size in range(1, len(others) + 1):
                    for subset in combinations(others, size):
                        self._accumulate(coeffs, entry, assembler, base, subset, g, n, terms)
        return Correlator(g, 1 + n, coeffs, certified=self.certified, mode=self.mode)

    def _kernel(self, entry: GroupSheets, base: Sheet, subset: Iterable[Sheet], terms: int) -> LaurentSeries:
        """``1 / (prod (y(z') - y(z)) * x'**|Z|)`` in the group coordinate."""

        subset = list(subset)
        denominator = LaurentSeries.constant(1)
        for sheet in subset:
            diff = sheet.y - base.y
            if diff.is_exact_zero():
                raise NonAdmissibleError("y(z') - y(z) vanishes identically", clause="lA1")
            if diff.is_possibly_zero():
                raise InsufficientPrecisionError(
                    "y(z') - y(z) has no known non-zero coefficient",
                    needed=diff.lo,
                    known=diff.lo - 1,
                    source="kernel",
                )
            denominator = denominator * diff
        x_power = entry.group.x_derivative() ** len(subset)
        return (denominator * x_power).inverse(terms=terms)

    def _accumulate(
        self,
        coeffs: dict[tuple[BasisLabel, ...], Any],
        entry: GroupSheets,
        assembler: Assembler,
        base: Sheet,
        subset: tuple[Sheet, ...],
        g: int,
        n: int,
        terms: int,
    ) -> None:
        kernel = self._kernel(entry, base, subset, terms)
        step = int(base.u.lo)
        shift = 0 if self.primitive_constant else step
        cutoff = -1 - kernel.lo - shift
        expansion = assembler.combination(g, [base, *subset], n, cutoff=cutoff)
        factor = divide(-base.sign, step)
        for key, series in expansion.items():
            integrand = kernel * series
            rest = spectator_labels(key, n)
            alpha = LaurentSeries.constant(1)
            order = 2
            while (order - 1) * step + integrand.lo <= -1 or (order == 2 and self.primitive_constant):
                alpha = alpha * base.u
                primitive = alpha
                if order == 2 and self.primitive_constant:
                    primitive = alpha + LaurentSeries.constant(self.primitive_constant)
                value = residue_of_product(primitive, integrand)
                if value != 0:
                    labels = (base.label(order), *rest)
                    coeffs[labels] = coeffs.get(labels, 0) + value * factor
                order += 1


def compute_correlators(
    curve: SpectralCurve,
    bound: int,
    *,
    mode: Mode = "point",
    force: bool = False,
    settings: EngineSettings | None = None,
) -> dict[tuple[int, int], Correlator]:
    engine = TopologicalRecursion(
        curve, mode=mode, force=force, settings=settings or EngineSettings.from_env()
    )
    return engine.correlators(bound)


def local_tr_step(
    curve: SpectralCurve,
    g: int,
    n: int,
    *,
    force: bool = False,
    settings: EngineSettings | None = None,
) -> Correlator:
    """``omega_{g,1+n}`` by the local recursion."""

    engine = TopologicalRecursion(curve, force=force, settings=settings or EngineSettings.from_env())
    return engine.correlator(g, 1 + n)


def global_tr_step(
    curve: SpectralCurve,
    g: int,
    n: int,
    *,
    mode: Mode = "fiber",
    force: bool = False,
    settings: EngineSettings | None = None,
) -> Correlator:
    """``omega_{g,1+n}`` with residues grouped per branch fibre (or per disc)."""

    engine = TopologicalRecursion(
        curve, mode=mode, force=force, settings=settings or EngineSettings.from_env()
    )
    return engine.correlator(g, 1 + n)


__all__ = [
    "LOGGER_NAME",
    "StepReport",
    "TopologicalRecursion",
    "compute_correlators",
    "global_tr_step",
    "local_tr_step",
    "residue_of_product",
    "stable_types",
]
