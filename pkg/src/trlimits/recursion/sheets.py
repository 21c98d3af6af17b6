"""Residue groups: points sharing a branch value, seen in one coordinate.

A group over the branch value ``q`` uses ``eta`` with ``x = q + C eta**L``
(``x = C eta**-L`` over infinity), ``L`` the lcm of the members' orders. A member
of order ``r`` has ``zeta = rho * eta**(L / r)`` in its own chart, so each of its
``r`` sheets is a series in ``eta``. With one member per group this is the local
recursion; the other modes put several members of a fibre in one group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Literal

from trlimits.algebra import lcm_all, principal_root
from trlimits.algebra.rational import divide, is_infinity
from trlimits.curve.local import RamPoint, StandardChart, build_chart, fiber_base_index, local_parameters
from trlimits.curve.model import SpectralCurve, location_key
from trlimits.curve.ramification import branch_values, fiber_points
from trlimits.errors import DomainError, FieldExtensionRequiredError
from trlimits.series import LaurentSeries

from .basis import Sheet

Mode = Literal["point", "disc", "fiber"]
MODES: tuple[str, ...] = ("point", "disc", "fiber")


@dataclass(frozen=True, slots=True)
class GroupMember:
    point: RamPoint
    chart: StandardChart
    rho: Any
    step: int

    @property
    def r(self) -> int:
        return self.point.r


@dataclass(frozen=True, slots=True)
class ResidueGroup:
    x_value: Any
    order: int
    scale: Any
    members: tuple[GroupMember, ...]

    @property
    def pole(self) -> bool:
        return is_infinity(self.x_value)

    def x_derivative(self) -> LaurentSeries:
        """``dx / deta``, exact."""

        if self.pole:
            return LaurentSeries.monomial(-self.order - 1, -self.order * self.scale)
        return LaurentSeries.monomial(self.order - 1, self.order * self.scale)

    def sheets(self, curve: SpectralCurve, terms: int) -> "GroupSheets":
        out: list[Sheet] = []
        bases: list[tuple[int, GroupMember]] = []
        for member in self.members:
            chart = member.chart
            theta = chart.theta if member.r > 1 else 1
            if theta is None:
                raise FieldExtensionRequiredError(
                    f"deck root of unity of order {member.r} missing",
                    polynomial=f"cyclotomic({member.r})",
                )
            y = curve.components[chart.component].y
            y_order = y.order_at(chart.location)
            y_local = y.expand_at(chart.location, y_order + terms - 1)
            for a in range(member.r):
                factor = member.rho * theta**a
                u = chart.u_of_zeta.substitute_power(factor, member.step)
                sheet = Sheet(len(out), chart.component, chart.location, u, y_local.compose(u), terms=terms)
                if a == 0:
                    bases.append((sheet.index, member))
                out.append(sheet)
        return GroupSheets(self, tuple(out), tuple(bases))

    def describe(self) -> dict[str, Any]:
        return {
            "x_value": "oo" if self.pole else str(self.x_value),
            "order": self.order,
            "members": [member.point.describe() for member in self.members],
        }


@dataclass(frozen=True, slots=True)
class GroupSheets:
    group: ResidueGroup
    sheets: tuple[Sheet, ...]
    bases: tuple[tuple[int, GroupMember], ...]


def _members(curve: SpectralCurve, points: list[RamPoint], terms: int) -> tuple[int, Any, tuple[GroupMember, ...]]:
    charts = [build_chart(curve, p.component, p.location, terms=terms) for p in points]
    base = charts[fiber_base_index(charts)]
    order = lcm_all(c.r for c in charts)
    members = []
    for point, chart in zip(points, charts):
        ratio = divide(chart.scale, base.scale) if chart.pole else divide(base.scale, chart.scale)
        rho = principal_root(ratio, chart.r) if ratio != 1 else 1
        members.append(GroupMember(point, chart, rho, order // chart.r))
    return order, base.scale, tuple(members)


def point_group(curve: SpectralCurve, point: RamPoint, terms: int) -> ResidueGroup:
    """The one-member group of ``point`` in its own chart (``eta = zeta``)."""

    order, scale, members = _members(curve, [point], terms)
    return ResidueGroup(point.x_value, order, scale, members)


def build_groups(
    curve: SpectralCurve,
    points: Iterable[RamPoint],
    mode: Mode,
    *,
    terms: int,
    include_noncontributing: bool = False,
) -> list[ResidueGroup]:
    """Residue groups for ``mode``; ``points`` are the filled ramification points."""

    if mode not in MODES:
        raise DomainError(f"unknown residue mode {mode!r}; expected one of {MODES}")
    points = list(points)
    groups: list[ResidueGroup] = []
    if mode == "point":
        for point in points:
            if not (point.contributes or include_noncontributing):
                continue
            groups.append(point_group(curve, point, terms))
        return groups
    for value, ramified in branch_values(points).items():
        if mode == "disc":
            members = ramified
        else:
            members = [
                local_parameters(curve, location, component=component)
                for component, location, _ in fiber_points(curve, value)
            ]
            members.sort(key=lambda p: (p.component, location_key(p.location)))
        order, scale, grouped = _members(curve, members, terms)
        groups.append(ResidueGroup(value, order, scale, grouped))
    return groups


__all__ = [
    "GroupMember",
    "GroupSheets",
    "MODES",
    "Mode",
    "ResidueGroup",
    "build_groups",
    "point_group",
]
