"""Local data of points in a fibre of ``x``, detached from any curve."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Mapping, Sequence

from trlimits.algebra import ExtFraction, divide, format_scalar, parse_scalar
from trlimits.algebra.rational import is_infinity
from trlimits.curve.local import RamPoint, local_parameters
from trlimits.curve.model import SpectralCurve
from trlimits.curve.ramification import fiber_points, find_ramification
from trlimits.errors import DomainError, ParseError

INFINITE_S = math.inf


@dataclass(frozen=True, slots=True)
class LocalData:
    """``(r, s_bar, s, tau)`` at one point; ``s`` is ``math.inf`` when every exponent is divisible by ``r``.

    ``tau_power`` is ``(tau / r) ** r'`` with ``r' = r / gcd(r, s_bar)``; it can be
    given instead of ``tau`` when no standard chart exists over the field.
    """

    r: int
    s_bar: int
    s: int | float = INFINITE_S
    tau: Any = None
    tau_power: Any = None
    label: str | None = None

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError(f"r must be positive, got {self.r}")
        if self.s != INFINITE_S and self.s < self.s_bar:
            raise ValueError(f"s = {self.s} is smaller than s_bar = {self.s_bar}")
        if self.r >= 2 and self.s != INFINITE_S and self.s % self.r == 0:
            raise ValueError(f"s = {self.s} is divisible by r = {self.r}")

    @classmethod
    def of_type(cls, r: int, s: int, *, tau: Any = None, label: str | None = None) -> "LocalData":
        """Data with ``s_bar = s``, as at the origin of the ``(r, s)``-curve."""

        return cls(r, s, INFINITE_S if r == 1 else s, tau=tau, label=label)

    @classmethod
    def from_point(cls, point: RamPoint) -> "LocalData":
        if not point.filled:
            raise DomainError("local parameters must be filled first")
        label = f"{point.component}:{format_scalar(point.location) if not is_infinity(point.location) else 'oo'}"
        return cls(point.r, point.s_bar, point.s, tau=point.tau, tau_power=point.tau_power, label=label)

    @property
    def nu(self) -> ExtFraction:
        return ExtFraction(self.s_bar, self.r)

    @property
    def r_prime(self) -> int:
        return self.r // math.gcd(self.r, self.s_bar)

    @property
    def floor_s(self) -> int | float:
        """``s`` for the floor terms of the pair conditions, ``s_bar`` when ``s`` is infinite."""

        return self.s_bar if self.s == INFINITE_S else self.s

    def normalised_tau_power(self) -> Any:
        if self.tau_power is not None:
            return self.tau_power
        if self.tau is None:
            return None
        return divide(self.tau, self.r) ** self.r_prime

    def describe(self) -> dict[str, Any]:
        def text(value: Any) -> Any:
            return None if value is None else format_scalar(value)

        return {
            "label": self.label,
            "r": self.r,
            "s_bar": self.s_bar,
            "s": "oo" if self.s == INFINITE_S else self.s,
            "nu": str(self.nu),
            "tau": text(self.tau),
            "tau_power": text(self.tau_power),
        }


@dataclass(frozen=True, slots=True)
class FiberData:
    """All points over one base point ``q``."""

    points: tuple[LocalData, ...]
    base: str | None = None

    def __post_init__(self) -> None:
        if not self.points:
            raise ValueError("a fibre has at least one point")

    @classmethod
    def of(cls, points: Iterable[LocalData], base: str | None = None) -> "FiberData":
        return cls(tuple(points), base)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def unramified(self) -> bool:
        return all(p.r == 1 for p in self.points)

    def describe(self) -> dict[str, Any]:
        return {"base": self.base, "points": [p.describe() for p in self.points]}


def fiber_from_curve(curve: SpectralCurve, value: Any) -> FiberData:
    """Local data at every point of ``x^{-1}(value)``; the curve must hold the fibre exactly."""

    points = []
    for component, location, _ in fiber_points(curve, value):
        points.append(LocalData.from_point(local_parameters(curve, location, component=component)))
    base = "oo" if is_infinity(value) else format_scalar(value)
    return FiberData.of(points, base)


def branch_fibers(curve: SpectralCurve) -> list[FiberData]:
    """Fibres over every branch value, ordered as the ramification points are."""

    seen: list[Any] = []
    for point in find_ramification(curve):
        if not any(point.x_value == v for v in seen):
            seen.append(point.x_value)
    return [fiber_from_curve(curve, value) for value in seen]


def _field(record: Mapping[str, Any], key: str, source: str) -> Any:
    if key not in record:
        raise ParseError(f"local data needs {key!r}", source=source)
    return record[key]


def _integer(value: Any, key: str, source: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{key!r} must be an integer, got {value!r}", source=source)
    return value


def local_data_from_json(record: Mapping[str, Any], *, source: str = "<local data>") -> LocalData:
    """Accepts ``{"r", "s_bar", "s", "tau", "tau_power", "label"}``; ``s`` may be ``"oo"``.

    ``s`` defaults to ``s_bar`` when ``r >= 2`` and to ``"oo"`` when ``r = 1``.
    """

    r = _integer(_field(record, "r", source), "r", source)
    s_bar = _integer(_field(record, "s_bar", source), "s_bar", source)
    raw_s = record.get("s", "oo" if r == 1 else s_bar)
    s: int | float = INFINITE_S if raw_s in ("oo", "inf", None) else _integer(raw_s, "s", source)
    tau = record.get("tau")
    tau_power = record.get("tau_power")
    try:
        return LocalData(
            r,
            s_bar,
            s,
            tau=None if tau is None else parse_scalar(str(tau)),
            tau_power=None if tau_power is None else parse_scalar(str(tau_power)),
            label=record.get("label"),
        )
    except ValueError as exc:
        raise ParseError(str(exc), source=source) from exc


def fibers_from_json(document: Mapping[str, Any] | Sequence[Any], *, source: str = "<local data>") -> list[FiberData]:
    """``{"fibers": [{"base": "0", "points": [...]}, ...]}`` or a bare list of fibres."""

    raw = document.get("fibers") if isinstance(document, Mapping) else document
    if not isinstance(raw, list) or not raw:
        raise ParseError("expected a non-empty list of fibres", source=source)
    fibers = []
    for entry in raw:
        if not isinstance(entry, Mapping) or not entry.get("points"):
            raise ParseError("each fibre needs a non-empty 'points' list", source=source)
        points = [local_data_from_json(p, source=source) for p in entry["points"]]
        base = entry.get("base")
        fibers.append(FiberData.of(points, None if base is None else str(base)))
    return fibers


__all__ = [
    "FiberData",
    "INFINITE_S",
    "LocalData",
    "branch_fibers",
    "fiber_from_curve",
    "fibers_from_json",
    "local_data_from_json",
]
