"""Pole basis of residue-free differentials on P^1.

A label ``(component, location, order)`` stands for ``dw / (w - a)**k`` at a
finite location ``a`` and for ``w**(k - 2) dw`` at infinity. Both have a single
pole of order ``k`` and no residue, so a correlator is a finite tensor of
coefficients over these labels.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import sympy

from trlimits.algebra import format_scalar, scalar_to_sympy
from trlimits.algebra.rational import is_infinity
from trlimits.curve.model import location_key
from trlimits.series import LaurentSeries


@dataclass(frozen=True, slots=True)
class BasisLabel:
    component: int
    location: Any
    order: int

    def __post_init__(self) -> None:
        if self.order < 1:
            raise ValueError(f"pole order must be positive, got {self.order}")
        if self.component < 0:
            raise ValueError("component index must be non-negative")

    @property
    def place(self) -> tuple[int, Any]:
        return (self.component, self.location)

    @property
    def at_infinity(self) -> bool:
        return is_infinity(self.location)

    def sort_key(self) -> tuple[int, tuple[int, str], int]:
        return (self.component, location_key(self.location), self.order)

    def text(self) -> str:
        return f"{place_text(self.component, self.location)}:{self.order}"

    def to_sympy(self, symbol: sympy.Symbol) -> sympy.Expr:
        """Coefficient of ``d symbol`` in the basis form."""

        if self.at_infinity:
            return symbol ** (self.order - 2)
        return 1 / (symbol - scalar_to_sympy(self.location)) ** self.order

    def evaluate_complex(self, w: Any, embed: Any) -> Any:
        """Coefficient of ``dw`` at a complex point; ``embed`` maps scalars to mpc."""

        if self.at_infinity:
            return w ** (self.order - 2)
        return 1 / (w - embed(self.location)) ** self.order


def place_text(component: int, location: Any) -> str:
    where = "oo" if is_infinity(location) else format_scalar(location)
    return f"C{component}:{where}"


def sort_labels(labels: tuple[BasisLabel, ...]) -> tuple[tuple[int, tuple[int, str], int], ...]:
    return tuple(label.sort_key() for label in labels)


class Sheet:
    """One preimage of the running point, as series in the residue coordinate.

    ``u`` is the local coordinate of ``(component, location)`` (``w - a`` or
    ``1/w``) composed with the sheet's parametrisation, ``du`` its derivative.
    Basis evaluations are cached per label.
    """

    __slots__ = ("index", "component", "location", "u", "du", "y", "terms", "_w", "_forms")

    def __init__(
        self,
        index: int,
        component: int,
        location: Any,
        u: LaurentSeries,
        y: LaurentSeries,
        *,
        terms: int,
    ) -> None:
        self.index = index
        self.component = component
        self.location = location
        self.u = u
        self.du = u.derivative()
        self.y = y
        self.terms = terms
        self._w: LaurentSeries | None = None
        self._forms: dict[BasisLabel, LaurentSeries | None] = {}

    @property
    def at_infinity(self) -> bool:
        return is_infinity(self.location)

    @property
    def sign(self) -> int:
        """``+1`` at finite locations, ``-1`` at infinity (orientation of ``u``)."""

        return -1 if self.at_infinity else 1

    @property
    def multiplicity(self) -> int:
        return int(self.u.valuation())

    def w(self) -> LaurentSeries:
        if self._w is None:
            if self.at_infinity:
                self._w = self.u.inverse(terms=self.terms)
            else:
                self._w = self.u + LaurentSeries.constant(self.location)
        return self._w

    def form(self, label: BasisLabel) -> LaurentSeries | None:
        """Coefficient of the residue-coordinate differential; ``None`` off-component."""

        if label not in self._forms:
            self._forms[label] = self._evaluate(label)
        return self._forms[label]

    def _evaluate(self, label: BasisLabel) -> LaurentSeries | None:
        if label.component != self.component:
            return None
        k = label.order
        if label.at_infinity:
            if self.at_infinity:
                return -(self.du * self.u.inverse(terms=self.terms) ** k)
            w = self.w()
            return w ** (k - 2) * self.du
        if not self.at_infinity and label.location == self.location:
            return self.du * self.u.inverse(terms=self.terms) ** k
        if self.at_infinity:
            one_minus = LaurentSeries.constant(1) - self.u.scale(label.location)
            tail = one_minus.inverse(terms=self.terms) ** k
            return -(self.du * self.u ** (k - 2) * tail)
        shifted = self.w() - LaurentSeries.constant(label.location)
        return self.du * shifted.inverse(terms=self.terms) ** k

    def pole_expansion(self, order: int) -> LaurentSeries:
        """Coefficient of the label ``(component, location, order)`` in ``omega_{0,2}(sheet, w_j)``."""

        return (self.du * self.u ** (order - 2)).scale(self.sign * (order - 1))

    def label(self, order: int) -> BasisLabel:
        return BasisLabel(self.component, self.location, order)


def bidifferential(a: Sheet, b: Sheet) -> LaurentSeries | None:
    """``omega_{0,2}`` between two sheets; ``None`` across components."""

    if a.component != b.component:
        return None
    if a.location == b.location:
        diff = a.u - b.u
        return a.du * b.du * diff.inverse(terms=a.terms) ** 2
    diff = a.w() - b.w()
    return a.w().derivative() * b.w().derivative() * diff.inverse(terms=a.terms) ** 2


__all__ = ["BasisLabel", "Sheet", "bidifferential", "place_text", "sort_labels"]
