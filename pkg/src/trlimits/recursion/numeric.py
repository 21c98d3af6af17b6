"""Numeric backend: the recursion as contour integrals over disc preimages.

Each branch value ``q`` gets a disc ``|x - q| < R`` (``|x| > R`` for infinity).
The residue at a point ``p`` over ``q`` becomes the integral over the component
of the preimage of the circle ``|x - q| = R`` around ``p``. Walking the circle
once in ``x`` and summing over every preimage near ``p`` covers that loop once,
and the sum is single-valued in ``x``, so the trapezoidal rule in the angle
converges geometrically.

Ramification points and label locations still come from the exact pass, so a
correlator from this module has the same pole basis as the exact one. Only the
coefficients are floating point (``mpmath`` at ``settings.digits``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Any, Iterator, Mapping, Sequence

import mpmath
import numpy as np

from trlimits.algebra import scalar_to_complex
from trlimits.algebra.rational import INFINITY, is_infinity
from trlimits.curve.local import RamPoint
from trlimits.curve.model import SpectralCurve
from trlimits.errors import ConfigurationError, DomainError, InternalEngineError
from trlimits.runtime.settings import EngineSettings
from trlimits.runtime.telemetry import record_event, span

from .assembly import compositions, set_partitions
from .basis import BasisLabel
from .correlator import Correlator
from .engine import LOGGER_NAME, TopologicalRecursion, stable_types
from .sheets import Mode, build_groups

NumericKey = tuple[tuple[int, BasisLabel], ...]
NumericExpansion = dict[NumericKey, Any]


def _complex_coeffs(poly: Any, dps: int) -> list[Any]:
    """Coefficients highest degree first, as ``mpc``."""

    return [scalar_to_complex(c, dps) for c in reversed(poly.coeffs)]


def _real(value: Any) -> Any:
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


def _chordal(a: Any, b: Any) -> Any:
    if a is None and b is None:
        return mpmath.mpf(0)
    if a is None or b is None:
        finite = b if a is None else a
        return 1 / mpmath.sqrt(1 + abs(finite) ** 2)
    return abs(a - b) / mpmath.sqrt((1 + abs(a) ** 2) * (1 + abs(b) ** 2))


class _NumericComponent:
    """``x``, ``x'`` and ``y`` of one component as complex polynomial pairs."""

    def __init__(self, comp: Any, dps: int) -> None:
        self.x_num = _complex_coeffs(comp.x.numerator, dps)
        self.x_den = _complex_coeffs(comp.x.denominator, dps)
        dx = comp.dx
        self.dx_num = _complex_coeffs(dx.numerator, dps)
        self.dx_den = _complex_coeffs(dx.denominator, dps)
        self.y_num = _complex_coeffs(comp.y.numerator, dps)
        self.y_den = _complex_coeffs(comp.y.denominator, dps)

    @staticmethod
    def _ratio(num: list[Any], den: list[Any], w: Any) -> Any:
        return mpmath.polyval(num, w) / mpmath.polyval(den, w)

    def dx(self, w: Any) -> Any:
        return self._ratio(self.dx_num, self.dx_den, w)

    def y(self, w: Any) -> Any:
        return self._ratio(self.y_num, self.y_den, w)

    def _shifted(self, value: Any) -> list[Any]:
        """Coefficients of ``num - value * den`` (of ``den`` for ``None``), leading zeros dropped."""

        size = max(len(self.x_num), len(self.x_den))
        num = [mpmath.mpc(0)] * (size - len(self.x_num)) + self.x_num
        den = [mpmath.mpc(0)] * (size - len(self.x_den)) + self.x_den
        if value is None:
            coeffs = den
        else:
            coeffs = [a - value * b for a, b in zip(num, den)]
        while coeffs and coeffs[0] == 0:
            coeffs = coeffs[1:]
        return coeffs

    def preimages(self, value: Any) -> list[Any]:
        """Every ``w`` with ``x(w) = value``, to working precision; ``value`` is never a branch value."""

        coeffs = self._shifted(value)
        if len(coeffs) <= 1:
            return []
        return list(mpmath.polyroots(coeffs, maxsteps=400, extraprec=2 * mpmath.mp.dps))

    def fibre(self, value: Any) -> list[Any]:
        """Rough roots of ``x = value`` (poles of ``x`` for ``None``), repeated roots included."""

        coeffs = self._shifted(value)
        if len(coeffs) <= 1:
            return []
        roots = np.roots(np.array([complex(c) for c in coeffs], dtype=complex))
        return [mpmath.mpc(root) for root in roots]


@dataclass(frozen=True, slots=True)
class _Place:
    component: int
    location: Any
    position: Any
    member: bool


@dataclass(frozen=True, slots=True)
class _Point:
    """A preimage of a quadrature node near one of the places of the fibre."""

    component: int
    w: Any
    place: _Place

    @property
    def u(self) -> Any:
        if self.place.position is None:
            return 1 / self.w
        return self.w - self.place.position


@dataclass
class ContourRecursion:
    """Floating-point recursion on the same residue groups as ``TopologicalRecursion``.

    ``radii`` maps branch values to disc radii in the ``x``-plane; missing
    entries get defaults from the branch-value spacing. ``nodes`` is the number
    of quadrature points on each circle; every coefficient is also computed
    with twice as many and the largest change is kept as the error estimate.
    """

    curve: SpectralCurve
    mode: Mode = "point"
    radii: Mapping[Any, Any] | None = None
    nodes: int | None = None
    force: bool = False
    settings: EngineSettings = field(default_factory=EngineSettings.from_env)
    frame: TopologicalRecursion = field(init=False)
    errors: dict[tuple[int, int], Any] = field(init=False, default_factory=dict)
    _store: dict[tuple[int, int], Correlator] = field(init=False, default_factory=dict)
    _fibres: list[tuple[Any, Any, list[RamPoint]]] = field(init=False, default_factory=list)

    def __post_init__(self) -> None:
        if self.curve.is_parametric():
            raise DomainError("the numeric backend needs a curve without the parameter t")
        self.nodes = self.nodes or self.settings.quadrature_nodes
        self.frame = TopologicalRecursion(self.curve, mode=self.mode, force=self.force, settings=self.settings)
        self.dps = self.settings.digits
        with mpmath.workdps(self.dps):
            self._components = [_NumericComponent(c, self.dps) for c in self.frame.curve.components]
            members: dict[Any, list[RamPoint]] = {}
            for group in build_groups(self.frame.curve, self.frame.points, self.mode, terms=2):
                members.setdefault(group.x_value, []).extend(m.point for m in group.members)
            radii = self._radii(list(members))
            self._fibres = [(value, radii[value], points) for value, points in members.items()]

    # -- discs ----------------------------------------------------------------

    def _embed(self, value: Any) -> Any:
        return None if is_infinity(value) else scalar_to_complex(value, self.dps)

    def _radii(self, values: list[Any]) -> dict[Any, Any]:
        branch = {p.x_value for p in self.frame.points} | set(values)
        finite = [v for v in branch if not is_infinity(v)]
        embedded = {v: self._embed(v) for v in finite}
        given = dict(self.radii or {})
        radii: dict[Any, Any] = {}
        for value in finite:
            if value in given:
                radii[value] = _real(given[value])
                continue
            gaps = [abs(embedded[value] - embedded[o]) for o in finite if o != value]
            radii[value] = min([mpmath.mpf("0.25"), *(gap * mpmath.mpf("0.3") for gap in gaps)])
        if any(radius <= 0 for radius in radii.values()):
            raise ConfigurationError("disc radii must be positive")
        for a, b in combinations(finite, 2):
            if abs(embedded[a] - embedded[b]) <= radii[a] + radii[b]:
                raise ConfigurationError(f"discs around {a} and {b} overlap")
        outer = max([abs(embedded[v]) + radii[v] for v in finite], default=mpmath.mpf(0))
        infinite = [v for v in branch if is_infinity(v)]
        for value in infinite:
            radius = _real(given[value]) if value in given else 2 * outer + 1
            if radius <= outer:
                raise ConfigurationError("the disc around infinity meets a finite disc")
            radii[value] = radius
        return radii

    # -- fibres -------------------------------------------------------------

    def _places(self, value: Any, members: list[RamPoint]) -> list[_Place]:
        """Numeric fibre over ``value``; member points keep their exact locations."""

        target = None if is_infinity(value) else self._embed(value)
        places: list[_Place] = []
        for point in members:
            places.append(_Place(point.component, point.location, self._embed(point.location), True))
        tolerance = mpmath.mpf("0.01")
        for index, comp in enumerate(self._components):
            candidates: list[Any] = [*comp.fibre(target), None]
            for position in candidates:
                if position is None and not self._infinity_in_fibre(index, value):
                    continue
                if any(p.component == index and _chordal(p.position, position) < tolerance for p in places):
                    continue
                places.append(_Place(index, None, position, False))
        return places

    def _infinity_in_fibre(self, component: int, value: Any) -> bool:
        at_infinity = self.frame.curve.components[component].x(INFINITY)
        if is_infinity(value):
            return is_infinity(at_infinity)
        return not is_infinity(at_infinity) and at_infinity == value

    def _points_at(self, node: Any, places: list[_Place]) -> list[_Point]:
        found: list[_Point] = []
        for index, comp in enumerate(self._components):
            for w in comp.preimages(node):
                nearest = min(
                    (p for p in places if p.component == index),
                    key=lambda p: _chordal(p.position, w),
                )
                found.append(_Point(index, w, nearest))
        return found

    # -- public API ---------------------------------------------------------

    def correlator(self, g: int, n: int) -> Correlator:
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
        for gn in stable_types(bound):
            self.correlator(*gn)
        return {gn: self._store[gn] for gn in stable_types(bound)}

    # -- one step -----------------------------------------------------------

    def _step(self, g: int, n: int) -> Correlator:
        assert self.nodes is not None
        max_order = self.frame.initial_window(g, n) + 2
        with span(
            "numeric::step", logger_name=LOGGER_NAME, metadata={"g": g, "n": n, "nodes": self.nodes}
        ), mpmath.workdps(self.dps):
            coarse = self._integrate(g, n - 1, self.nodes, max_order)
            fine = self._integrate(g, n - 1, 2 * self.nodes, max_order)
            error = max((abs(fine.get(k, 0) - coarse.get(k, 0)) for k in set(fine) | set(coarse)), default=0)
            scale = max([mpmath.mpf(1), *(abs(v) for v in fine.values())])
            floor = max(10 * error, scale * mpmath.mpf(10) ** (-(self.dps // 2)))
            coeffs = {k: v for k, v in fine.items() if abs(v) > floor}
        self.errors[(g, n)] = error
        record_event(
            "numeric.step",
            data={"g": g, "n": n, "error": mpmath.nstr(error, 5), "terms": len(coeffs)},
            logger_name=LOGGER_NAME,
        )
        return Correlator(
            g,
            n,
            coeffs,
            certified=False,
            mode=self.mode,
            notes=(f"quadrature error estimate {mpmath.nstr(error, 5)}",),
        )

    def _integrate(self, g: int, n: int, nodes: int, max_order: int) -> dict[tuple[BasisLabel, ...], Any]:
        totals: dict[tuple[BasisLabel, ...], Any] = {}
        angles = np.array([2 * mpmath.pi * j / nodes for j in range(nodes)], dtype=object)
        phases = np.array([mpmath.expj(a) for a in angles], dtype=object)
        for value, radius, members in self._fibres:
            places = self._places(value, members)
            center = mpmath.mpc(0) if is_infinity(value) else self._embed(value)
            orientation = -1 if is_infinity(value) else 1
            for phase in phases:
                points = self._points_at(center + radius * phase, places)
                weight = orientation * radius * phase / nodes
                self._node(totals, g, n, points, weight, max_order)
        return totals

    def _node(
        self,
        totals: dict[tuple[BasisLabel, ...], Any],
        g: int,
        n: int,
        points: list[_Point],
        weight: Any,
        max_order: int,
    ) -> None:
        sheets = [p for p in points if p.place.member]
        for base in sheets:
            comp = self._components[base.component]
            y_base = comp.y(base.w)
            dx_base = comp.dx(base.w)
            others = [p for p in sheets if p is not base]
            for size in range(1, len(others) + 1):
                for subset in combinations(others, size):
                    kernel = 1 / dx_base
                    for other in subset:
                        other_comp = self._components[other.component]
                        kernel /= other_comp.dx(other.w) * (other_comp.y(other.w) - y_base)
                    expansion = self._combination(g, [base, *subset], n, max_order)
                    self._residues(totals, base, expansion, kernel * weight, n, max_order)

    def _residues(
        self,
        totals: dict[tuple[BasisLabel, ...], Any],
        base: _Point,
        expansion: NumericExpansion,
        factor: Any,
        n: int,
        max_order: int,
    ) -> None:
        u = base.u
        sign = -1 if base.place.position is None else 1
        place = base.place
        for key, value in expansion.items():
            rest = tuple(label for _, label in sorted(key, key=lambda item: item[0]))
            if len(rest) != n:
                raise InternalEngineError("spectator labels missing from a numeric expansion")
            power = u
            for order in range(2, max_order + 1):
                label = BasisLabel(place.component, place.location, order)
                labels = (label, *rest)
                totals[labels] = totals.get(labels, 0) - sign * power * value * factor
                power *= u

    # -- W' at numeric points -------------------------------------------------------

    def _combination(self, g: int, sheets: Sequence[_Point], n: int, max_order: int) -> NumericExpansion:
        i = len(sheets)
        result: NumericExpansion = {}
        for partition in set_partitions(list(range(i))):
            blocks = len(partition)
            genus_total = g - i + blocks
            if genus_total < 0:
                continue
            for assignment in product(range(blocks), repeat=n):
                spectators = [[j for j in range(n) if assignment[j] == b] for b in range(blocks)]
                for genera in compositions(genus_total, blocks):
                    if any(h == 0 and len(b) + len(s) == 1 for b, s, h in zip(partition, spectators, genera)):
                        continue
                    term: NumericExpansion | None = {(): mpmath.mpc(1)}
                    for block, specs, h in zip(partition, spectators, genera):
                        factor = self._block(h, [sheets[k] for k in block], specs, max_order)
                        if factor is None:
                            term = None
                            break
                        term = _multiply(term, factor)
                    if term:
                        for key, value in term.items():
                            result[key] = result.get(key, 0) + value
        return result

    def _block(
        self, h: int, members: list[_Point], specs: list[int], max_order: int
    ) -> NumericExpansion | None:
        size = len(members) + len(specs)
        if h == 0 and size == 2:
            if len(members) == 2:
                a, b = members
                if a.component != b.component:
                    return None
                return {(): 1 / (a.w - b.w) ** 2}
            return self._spectator_block(members[0], specs[0], max_order)
        correlator = self._store.get((h, size))
        if correlator is None:
            raise InternalEngineError(f"omega_{h},{size} is needed before it was computed")
        out: NumericExpansion = {}
        count = len(members)
        for labels, coeff in correlator.coeffs.items():
            value = coeff
            for point, label in zip(members, labels[:count]):
                if label.component != point.component:
                    value = 0
                    break
                value = value * label.evaluate_complex(point.w, self._embed)
            if value == 0:
                continue
            key = tuple(zip(specs, labels[count:]))
            out[key] = out.get(key, 0) + value
        return out

    def _spectator_block(self, point: _Point, j: int, max_order: int) -> NumericExpansion:
        """``omega_{0,2}(z, w_j)`` split over the pole basis at the place of ``z``."""

        place = point.place
        out: NumericExpansion = {}
        for order in range(2, max_order + 1):
            label = BasisLabel(place.component, place.location, order)
            if place.position is None:
                value = (order - 1) * point.w ** (-order)
            else:
                value = (order - 1) * (point.w - place.position) ** (order - 2)
            out[((j, label),)] = value
        return out


def _multiply(a: NumericExpansion, b: NumericExpansion) -> NumericExpansion:
    out: NumericExpansion = {}
    for key_a, value_a in a.items():
        for key_b, value_b in b.items():
            key = tuple(sorted(key_a + key_b, key=lambda item: item[0]))
            out[key] = out.get(key, 0) + value_a * value_b
    return out


def contour_correlator_numeric(
    curve: SpectralCurve,
    g: int,
    n: int,
    *,
    radii: Mapping[Any, Any] | None = None,
    nodes: int | None = None,
    mode: Mode = "point",
    force: bool = False,
    settings: EngineSettings | None = None,
) -> Correlator:
    """``omega_{g,n}`` by contour quadrature; coefficients are ``mpmath`` complex numbers."""

    engine = ContourRecursion(
        curve, mode=mode, radii=radii, nodes=nodes, force=force, settings=settings or EngineSettings.from_env()
    )
    return engine.correlator(g, n)


def relative_difference(exact: Correlator, numeric: Correlator, *, dps: int = 30) -> Any:
    """Largest coefficient difference, relative to the largest exact coefficient."""

    if (exact.g, exact.n) != (numeric.g, numeric.n):
        raise ValueError("correlators of different type")

    def key(labels: tuple[BasisLabel, ...]) -> Iterator[tuple[int, Any, int]]:
        for label in labels:
            if label.at_infinity:
                where: Any = "oo"
            else:
                z = complex(scalar_to_complex(label.location, dps))
                where = (round(z.real, 10), round(z.imag, 10))
            yield (label.component, where, label.order)

    with mpmath.workdps(dps):
        numeric_values = {tuple(key(labels)): value for labels, value in numeric.coeffs.items()}
        exact_values = {
            tuple(key(labels)): scalar_to_complex(value, dps) for labels, value in exact.coeffs.items()
        }
        scale = max([mpmath.mpf(1), *(abs(v) for v in exact_values.values())])
        worst = mpmath.mpf(0)
        for labels in set(numeric_values) | set(exact_values):
            worst = max(worst, abs(numeric_values.get(labels, 0) - exact_values.get(labels, 0)))
        return worst / scale


__all__ = ["ContourRecursion", "contour_correlator_numeric", "relative_difference"]
