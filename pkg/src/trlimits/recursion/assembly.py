"""Products of correlators evaluated at sheets: the W and W' combinations.

An *expansion* maps a spectator key to a Laurent series in the residue
coordinate. With symbolic spectators the key is a tuple of ``(index, label)``
pairs, one per spectator, naming the basis form each spectator carries. With
spectators pinned at exact points the key is empty and the basis forms are
evaluated instead.

Symbolic spectators make ``omega_{0,2}(sheet, w_j)`` an infinite sum over pole
orders; a ``cutoff`` on the valuation bounds it. Terms whose valuation is above
the cutoff cannot reach the residue and are dropped while multiplying.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Any, Callable, Iterator, Mapping, Sequence

from trlimits.algebra.rational import as_scalar, divide
from trlimits.errors import InternalEngineError
from trlimits.series import LaurentSeries

from .basis import BasisLabel, Sheet, bidifferential
from .correlator import Correlator

SpectatorKey = tuple[tuple[int, BasisLabel], ...]
Expansion = dict[SpectatorKey, LaurentSeries]


def set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """Every partition of ``items`` into non-empty blocks, blocks in first-seen order."""

    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        yield [[first], *partition]
        for index in range(len(partition)):
            yield [*partition[:index], [first, *partition[index]], *partition[index + 1 :]]


def compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """Ordered ways of writing ``total`` as ``parts`` non-negative integers."""

    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in compositions(total - head, parts - 1):
            yield (head, *tail)


@dataclass(frozen=True, slots=True)
class PinnedSpectator:
    """A spectator fixed at an exact point ``w = value`` on ``component``."""

    component: int
    value: Any

    def basis_value(self, label: BasisLabel) -> Any:
        if label.component != self.component:
            return 0
        if label.at_infinity:
            return as_scalar(self.value) ** (label.order - 2)
        return divide(1, (self.value - label.location) ** label.order)


class _Factor:
    """One block of a partition, materialised lazily under a valuation limit."""

    def __init__(self, floor: int, build: Callable[[float], Expansion]) -> None:
        self.floor = floor
        self.build = build


def _merge(a: SpectatorKey, b: SpectatorKey) -> SpectatorKey:
    if not a:
        return b
    if not b:
        return a
    return tuple(sorted(a + b, key=lambda item: item[0]))


def _floor(expansion: Mapping[SpectatorKey, LaurentSeries]) -> int:
    return min(series.lo for series in expansion.values())


def multiply(factors: Sequence[_Factor], cutoff: float) -> Expansion:
    """Product of the factors, keeping only terms of valuation at most ``cutoff``."""

    total = sum(f.floor for f in factors)
    if total > cutoff:
        return {}
    built = [f.build(cutoff - (total - f.floor)) for f in factors]
    floors = [_floor(e) if e else None for e in built]
    if any(fl is None for fl in floors):
        return {}
    acc: Expansion = {(): LaurentSeries.constant(1)}
    for index, expansion in enumerate(built):
        remaining = sum(fl for fl in floors[index + 1 :] if fl is not None)
        step: Expansion = {}
        for key_a, series_a in acc.items():
            for key_b, series_b in expansion.items():
                if series_a.lo + series_b.lo + remaining > cutoff:
                    continue
                key = _merge(key_a, key_b)
                term = series_a * series_b
                step[key] = step[key] + term if key in step else term
        acc = step
        if not acc:
            return {}
    return acc


def add_into(target: Expansion, source: Expansion) -> None:
    for key, series in source.items():
        target[key] = target[key] + series if key in target else series


class Assembler:
    """Evaluates W and W' for a fixed set of lower correlators.

    ``store`` maps ``(g, n)`` to correlators; ``omega_{0,1}`` and ``omega_{0,2}``
    are never stored and are produced from the sheets directly. ``pinned`` fixes
    the spectators at exact points; otherwise they stay symbolic.
    """

    def __init__(
        self,
        store: Mapping[tuple[int, int], Correlator],
        *,
        x_derivative: LaurentSeries,
        pinned: Sequence[PinnedSpectator] | None = None,
    ) -> None:
        self.store = store
        self.x_derivative = x_derivative
        self.pinned = tuple(pinned) if pinned is not None else None
        self._cache: dict[tuple[Any, ...], dict[tuple[Any, ...], LaurentSeries]] = {}

    # -- blocks ---------------------------------------------------------

    def _stored(self, g: int, sheets: Sequence[Sheet], spectators: Sequence[int]) -> _Factor:
        n = len(sheets) + len(spectators)
        correlator = self.store.get((g, n))
        if correlator is None:
            raise InternalEngineError(f"omega_{g},{n} is needed before it was computed")
        key = (g, n, tuple(s.index for s in sheets), len(spectators))
        if key not in self._cache:
            self._cache[key] = self._evaluate(correlator, sheets)
        by_labels = self._cache[key]
        expansion: Expansion = {}
        for labels, series in by_labels.items():
            if self.pinned is None:
                spec_key: SpectatorKey = tuple(zip(spectators, labels))
                add_into(expansion, {spec_key: series})
                continue
            value: Any = 1
            for j, label in zip(spectators, labels):
                value = value * self.pinned[j].basis_value(label)
                if value == 0:
                    break
            if value != 0:
                add_into(expansion, {(): series.scale(value)})
        return _Factor(_floor(expansion) if expansion else 0, lambda limit: expansion)

    @staticmethod
    def _evaluate(correlator: Correlator, sheets: Sequence[Sheet]) -> dict[tuple[Any, ...], LaurentSeries]:
        """Sheet slots filled with basis forms, remaining labels kept as keys."""

        count = len(sheets)
        out: dict[tuple[Any, ...], LaurentSeries] = {}
        for labels, coeff in correlator.coeffs.items():
            series: LaurentSeries | None = LaurentSeries.constant(coeff)
            for sheet, label in zip(sheets, labels[:count]):
                form = sheet.form(label)
                if form is None:
                    series = None
                    break
                series = series * form
            if series is None:
                continue
            rest = labels[count:]
            out[rest] = out[rest] + series if rest in out else series
        return out

    def _sheet_pair(self, a: Sheet, b: Sheet) -> _Factor | None:
        series = bidifferential(a, b)
        if series is None:
            return None
        expansion = {(): series}
        return _Factor(series.lo, lambda limit: expansion)

    def _sheet_spectator(self, sheet: Sheet, j: int) -> _Factor | None:
        if self.pinned is not None:
            spectator = self.pinned[j]
            if spectator.component != sheet.component:
                return None
            w = sheet.w()
            gap = LaurentSeries.constant(spectator.value) - w
            series = w.derivative() * gap.inverse(terms=sheet.terms) ** 2
            expansion = {(): series}
            return _Factor(series.lo, lambda limit: expansion)
        step = int(sheet.u.lo)
        floor = int(sheet.du.lo)

        def build(limit: float) -> Expansion:
            out: Expansion = {}
            order = 2
            while floor + (order - 2) * step <= limit:
                out[((j, sheet.label(order)),)] = sheet.pole_expansion(order)
                order += 1
            return out

        return _Factor(floor, build)

    def _disk(self, sheet: Sheet) -> _Factor:
        series = sheet.y * self.x_derivative
        expansion = {(): series}
        return _Factor(series.lo, lambda limit: expansion)

    # -- W, W' ----------------------------------------------------------

    def combination(
        self,
        g: int,
        sheets: Sequence[Sheet],
        n: int,
        *,
        cutoff: float,
        disks: bool = False,
    ) -> Expansion:
        """``W_{g,i,n}`` (``disks=True``) or ``W'_{g,i,n}`` at the given sheets.

        Sum over set partitions of the sheets, distributions of the spectators
        over the blocks and genera with ``i + sum(g_L - 1) = g``.
        """

        i = len(sheets)
        result: Expansion = {}
        for partition in set_partitions(list(range(i))):
            blocks = len(partition)
            genus_total = g - i + blocks
            if genus_total < 0:
                continue
            for assignment in product(range(blocks), repeat=n):
                spectators = [[j for j in range(n) if assignment[j] == b] for b in range(blocks)]
                for genera in compositions(genus_total, blocks):
                    factors = self._factors(partition, spectators, genera, sheets, disks)
                    if factors is None:
                        continue
                    add_into(result, multiply(factors, cutoff))
        return result

    def _factors(
        self,
        partition: list[list[int]],
        spectators: list[list[int]],
        genera: tuple[int, ...],
        sheets: Sequence[Sheet],
        disks: bool,
    ) -> list[_Factor] | None:
        if not disks and any(h == 0 and len(b) + len(s) == 1 for b, s, h in zip(partition, spectators, genera)):
            return None
        factors: list[_Factor] = []
        for block, specs, h in zip(partition, spectators, genera):
            members = [sheets[k] for k in block]
            size = len(members) + len(specs)
            factor: _Factor | None
            if h == 0 and size == 1:
                factor = self._disk(members[0])
            elif h == 0 and size == 2:
                if len(members) == 2:
                    factor = self._sheet_pair(members[0], members[1])
                else:
                    factor = self._sheet_spectator(members[0], specs[0])
            else:
                factor = self._stored(h, members, specs)
            if factor is None:
                return None
            factors.append(factor)
        return factors


def assemble_w_prime(
    store: Mapping[tuple[int, int], Correlator],
    g: int,
    sheets: Sequence[Sheet],
    n: int,
    *,
    x_derivative: LaurentSeries,
    cutoff: float = math.inf,
    pinned: Sequence[PinnedSpectator] | None = None,
) -> Expansion:
    """One-shot ``W'_{g,i,n}`` at ``sheets``; the engine keeps an ``Assembler`` per group instead."""

    return Assembler(store, x_derivative=x_derivative, pinned=pinned).combination(g, sheets, n, cutoff=cutoff)


def spectator_labels(key: SpectatorKey, n: int) -> tuple[BasisLabel, ...]:
    labels = dict(key)
    if len(labels) != n:
        raise InternalEngineError(f"spectator key {key!r} does not cover {n} spectators")
    return tuple(labels[j] for j in range(n))


__all__ = [
    "Assembler",
    "Expansion",
    "PinnedSpectator",
    "SpectatorKey",
    "add_into",
    "assemble_w_prime",
    "compositions",
    "multiply",
    "set_partitions",
    "spectator_labels",
]
