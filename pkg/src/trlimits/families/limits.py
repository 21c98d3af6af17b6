"""Correlators over a family and their behaviour at the central fibre.

``FamilyRecursion`` produces ``omega_{g,n}`` with coefficients in ``Q(t)``.
Homogeneous families are computed once at ``t = 1`` and rescaled; other
families run the recursion on the parametric curve, and fall back to a few
sampled fibres when the ramification is not rational in ``t``. The limit
``t -> 0`` is read from the ``t``-adic valuation of the rendered form and
compared with the recursion run on the central curve itself.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import sympy

from trlimits.algebra import T, valuation_at_zero
from trlimits.curve import prepare_curve
from trlimits.errors import FieldExtensionRequiredError, FiberInvalidError, NonAdmissibleError
from trlimits.globalization import FamilyReport, FamilySample, branch_fibers, family_admissibility_report
from trlimits.recursion import BasisLabel, Correlator, TopologicalRecursion, stable_types
from trlimits.runtime.settings import EngineSettings
from trlimits.runtime.telemetry import record_event, span

from .model import LOGGER_NAME, FamilySpec, _t_sympy, build_rs_family

METHODS = ("auto", "rescaled", "direct", "sampled")
DEFAULT_SAMPLES: tuple[Fraction, ...] = (Fraction(1), Fraction(2), Fraction(1, 3))


@dataclass(frozen=True)
class FamilyCorrelator:
    """``omega_{g,n}`` over the family: exact in ``t`` when ``exact`` is set."""

    g: int
    n: int
    method: str
    exact: Correlator | None
    samples: Mapping[str, Correlator] = field(default_factory=dict)

    def render(self) -> sympy.Expr | None:
        return None if self.exact is None else self.exact.render()

    def at(self, t_value: Any) -> Correlator | None:
        if self.exact is not None:
            return self.exact.specialize(t_value)
        return self.samples.get(str(_t_sympy(t_value)))

    def describe(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"g": self.g, "n": self.n, "method": self.method}
        if self.exact is not None:
            payload["correlator"] = self.exact.describe()
        if self.samples:
            payload["samples"] = {t: c.describe() for t, c in sorted(self.samples.items())}
        return payload


@dataclass(frozen=True)
class LimitReport:
    """Behaviour of ``omega_{g,n}`` as ``t -> 0``.

    ``valuation`` is the order in ``t`` of the rendered form for generic ``w``;
    the limit exists iff it is non-negative. ``None`` fields mean the family
    was only sampled and no verdict was reached.
    """

    g: int
    n: int
    method: str
    valuation: int | None
    limit: sympy.Expr | None
    central: Correlator | None
    central_certified: bool
    matches_central: bool | None
    coefficient_valuation: int | None = None

    @property
    def exists(self) -> bool | None:
        return None if self.valuation is None else self.valuation >= 0

    @property
    def divergent(self) -> bool | None:
        return None if self.valuation is None else self.valuation < 0

    def verdict(self) -> str:
        if self.valuation is None:
            return "undetermined"
        if self.valuation < 0:
            return f"divergent (order t^{self.valuation})"
        return "matches central" if self.matches_central else "converges, differs from central"

    def describe(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "g": self.g,
            "n": self.n,
            "method": self.method,
            "verdict": self.verdict(),
            "exists": self.exists,
            "valuation": self.valuation,
            "matches_central": self.matches_central,
            "central_certified": self.central_certified,
        }
        if self.coefficient_valuation is not None:
            payload["coefficient_valuation"] = self.coefficient_valuation
        if self.limit is not None:
            payload["limit"] = sympy.sstr(sympy.factor(self.limit))
        if self.central is not None:
            payload["central"] = self.central.render_text()
        return payload


def t_valuation(expr: sympy.Expr) -> tuple[int, sympy.Expr]:
    """Order in ``t`` of a rational function of ``t`` and other variables, with its leading part."""

    num, den = sympy.fraction(sympy.cancel(sympy.together(expr)))

    def lowest(poly_expr: sympy.Expr) -> tuple[int, sympy.Expr]:
        poly = sympy.Poly(sympy.expand(poly_expr), T)
        order = min(monomial[0] for monomial in poly.monoms())
        return order, poly.coeff_monomial(T**order)

    num_order, num_lead = lowest(num)
    den_order, den_lead = lowest(den)
    return num_order - den_order, sympy.cancel(num_lead / den_lead)


def _coefficient_valuation(correlator: Correlator) -> int | None:
    values = [valuation_at_zero(v) for v in correlator.coeffs.values()]
    finite = [v for v in values if v != math.inf]
    return int(min(finite)) if finite else None


@dataclass
class FamilyRecursion:
    """Recursion over a family, with one engine per fibre kept for reuse."""

    family: FamilySpec
    method: str = "auto"
    settings: EngineSettings = field(default_factory=EngineSettings.from_env)
    samples: tuple[Any, ...] = DEFAULT_SAMPLES
    _engines: dict[str, TopologicalRecursion] = field(init=False, default_factory=dict)
    _results: dict[tuple[int, int], FamilyCorrelator] = field(init=False, default_factory=dict)
    _central: TopologicalRecursion | None = field(init=False, default=None)
    _direct: TopologicalRecursion | None = field(init=False, default=None)
    _resolved: str | None = field(init=False, default=None)

    def __post_init__(self) -> None:
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")

    # -- engines ----------------------------------------------------------

    def fibre_engine(self, t_value: Any) -> TopologicalRecursion:
        key = str(_t_sympy(t_value))
        if key not in self._engines:
            self._engines[key] = TopologicalRecursion(self.family.fibre(t_value), settings=self.settings)
        return self._engines[key]

    def central_engine(self) -> TopologicalRecursion:
        if self._central is None:
            curve = self.family.central_curve()
            try:
                self._central = TopologicalRecursion(curve, settings=self.settings)
            except NonAdmissibleError as exc:
                record_event(
                    "family.central_forced",
                    level="warning",
                    data={"family": self.family.name, "clause": exc.clause},
                    logger_name=LOGGER_NAME,
                )
                self._central = TopologicalRecursion(curve, force=True, settings=self.settings)
        return self._central

    def resolved_method(self) -> str:
        if self._resolved is None:
            self._resolved = self._resolve()
        return self._resolved

    def _resolve(self) -> str:
        if self.method != "auto":
            return self.method
        if not self.family.depends_on_t():
            return "direct"
        if self.family.homogeneity is not None and not self.family.bad_set.contains(1):
            return "rescaled"
        return "direct"

    # -- correlators --------------------------------------------------------

    def correlator(self, g: int, n: int) -> FamilyCorrelator:
        if (g, n) in self._results:
            return self._results[(g, n)]
        method = self.resolved_method()
        start = time.perf_counter()
        with span(
            "families::correlator",
            logger_name=LOGGER_NAME,
            metadata={"family": self.family.name, "g": g, "n": n, "method": method},
        ):
            result = self._compute(g, n, method)
        record_event(
            "family.correlator",
            data={
                "family": self.family.name,
                "g": g,
                "n": n,
                "method": result.method,
                "elapsed": round(time.perf_counter() - start, 6),
            },
            logger_name=LOGGER_NAME,
        )
        self._results[(g, n)] = result
        return result

    def _compute(self, g: int, n: int, method: str) -> FamilyCorrelator:
        if method == "rescaled":
            return FamilyCorrelator(g, n, "rescaled", self._rescaled(g, n))
        if method == "direct":
            try:
                if self._direct is None:
                    self._direct = TopologicalRecursion(self.family.curve(), settings=self.settings)
                return FamilyCorrelator(g, n, "direct", self._direct.correlator(g, n))
            except FieldExtensionRequiredError as exc:
                record_event(
                    "family.sampled_fallback",
                    level="warning",
                    data={"family": self.family.name, "polynomial": str(exc.polynomial)},
                    logger_name=LOGGER_NAME,
                )
                self._resolved = "sampled"
        return FamilyCorrelator(g, n, "sampled", None, self._sampled(g, n))

    def _rescaled(self, g: int, n: int) -> Correlator:
        """``omega^t(w) = l^e omega^1(w / l)`` for the homogeneity scale ``l``."""

        weights = self.family.homogeneity
        assert weights is not None
        base = self.fibre_engine(1).correlator(g, n)
        scale = weights.scale()
        exponent = (weights.x_weight + weights.y_weight) * (2 - 2 * g - n) - n
        coeffs: dict[tuple[BasisLabel, ...], Any] = {}
        for labels, value in base.coeffs.items():
            power = exponent + sum(2 - lb.order if lb.at_infinity else lb.order for lb in labels)
            key = tuple(
                lb if lb.at_infinity else BasisLabel(lb.component, scale * lb.location, lb.order) for lb in labels
            )
            coeffs[key] = coeffs.get(key, 0) + scale**power * value
        return Correlator(g, n, coeffs, certified=base.certified, mode=base.mode, notes=("rescaled from t = 1",))

    def _sampled(self, g: int, n: int) -> dict[str, Correlator]:
        found: dict[str, Correlator] = {}
        for t_value in self.samples:
            try:
                found[str(_t_sympy(t_value))] = self.fibre_engine(t_value).correlator(g, n)
            except FiberInvalidError:
                record_event(
                    "family.sample_skipped",
                    level="warning",
                    data={"family": self.family.name, "t": str(t_value)},
                    logger_name=LOGGER_NAME,
                )
        return found

    def correlators(self, bound: int) -> dict[tuple[int, int], FamilyCorrelator]:
        return {gn: self.correlator(*gn) for gn in stable_types(bound)}

    # -- limits -------------------------------------------------------------

    def limit(self, g: int, n: int) -> LimitReport:
        result = self.correlator(g, n)
        central_engine = self.central_engine()
        central = central_engine.correlator(g, n)
        if result.exact is None:
            return LimitReport(g, n, result.method, None, None, central, central_engine.certified, None)
        with span("families::limit", logger_name=LOGGER_NAME, metadata={"family": self.family.name, "g": g, "n": n}):
            rendered = result.exact.render()
            if rendered == 0:
                order, limit = 0, sympy.Integer(0)
            elif T not in rendered.free_symbols:
                order, limit = 0, rendered
            else:
                order, lead = t_valuation(rendered)
                limit = lead if order == 0 else (sympy.Integer(0) if order > 0 else None)
            matches = limit is not None and sympy.cancel(limit - central.render()) == 0
        record_event(
            "family.limit",
            data={"family": self.family.name, "g": g, "n": n, "valuation": order, "matches_central": matches},
            logger_name=LOGGER_NAME,
        )
        return LimitReport(
            g,
            n,
            result.method,
            order,
            limit,
            central,
            central_engine.certified,
            matches,
            _coefficient_valuation(result.exact),
        )


def correlators_over_t(
    family: FamilySpec,
    g: int,
    n: int,
    *,
    method: str = "auto",
    settings: EngineSettings | None = None,
) -> FamilyCorrelator:
    return FamilyRecursion(family, method, settings or EngineSettings.from_env()).correlator(g, n)


def limit_at_center(
    family: FamilySpec,
    g: int,
    n: int,
    *,
    method: str = "auto",
    settings: EngineSettings | None = None,
) -> LimitReport:
    return FamilyRecursion(family, method, settings or EngineSettings.from_env()).limit(g, n)


def check_specialization(
    recursion: FamilyRecursion,
    g: int,
    n: int,
    samples: Iterable[Any] = DEFAULT_SAMPLES,
) -> dict[str, bool]:
    """Whether specializing the exact correlator agrees with computing on the fibre."""

    exact = recursion.correlator(g, n).exact
    if exact is None:
        return {}
    outcome: dict[str, bool] = {}
    for t_value in samples:
        key = str(_t_sympy(t_value))
        if recursion.family.bad_set.contains(t_value):
            continue
        direct = recursion.fibre_engine(t_value).correlator(g, n)
        try:
            specialized = exact.specialize(t_value)
        except ZeroDivisionError:
            outcome[key] = False
            continue
        outcome[key] = sympy.cancel(specialized.render() - direct.render()) == 0
    return outcome


def family_admissibility(family: FamilySpec, samples: Sequence[Any] = DEFAULT_SAMPLES) -> FamilyReport:
    """Globalisation verdicts of the fibres of ``x`` at a few members."""

    collected = [
        FamilySample(
            t_value,
            tuple(branch_fibers(prepare_curve(family.fibre(t_value), fibers=True))),
            label=str(t_value),
        )
        for t_value in samples
        if not family.bad_set.contains(t_value)
    ]
    return family_admissibility_report(collected)


@dataclass(frozen=True, slots=True)
class DichotomyRow:
    r: int
    s: int
    congruent: bool
    verdicts: Mapping[tuple[int, int], str]
    matches: bool

    def describe(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "s": self.s,
            "congruent": self.congruent,
            "matches": self.matches,
            "verdicts": {f"{g},{n}": v for (g, n), v in sorted(self.verdicts.items())},
        }


def commutation_table(
    r_max: int,
    targets: Sequence[tuple[int, int]] = ((0, 3), (1, 1)),
    *,
    settings: EngineSettings | None = None,
) -> list[DichotomyRow]:
    """Limit verdicts of the one-parameter ``(r, s)`` families against ``r = +-1 mod s``."""

    rows: list[DichotomyRow] = []
    for r in range(2, r_max + 1):
        for s in range(1, r + 2):
            if s == r or math.gcd(r, s) != 1:
                continue
            recursion = FamilyRecursion(build_rs_family(r, s), settings=settings or EngineSettings.from_env())
            reports = {gn: recursion.limit(*gn) for gn in targets}
            congruent = r % s in (1 % s, (s - 1) % s)
            rows.append(
                DichotomyRow(
                    r,
                    s,
                    congruent,
                    {gn: rep.verdict() for gn, rep in reports.items()},
                    all(rep.matches_central for rep in reports.values()),
                )
            )
    return rows


__all__ = [
    "DEFAULT_SAMPLES",
    "DichotomyRow",
    "FamilyCorrelator",
    "FamilyRecursion",
    "LimitReport",
    "METHODS",
    "check_specialization",
    "commutation_table",
    "correlators_over_t",
    "family_admissibility",
    "limit_at_center",
    "t_valuation",
]
