"""Correlators as coefficient tensors over the pole basis."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping

import sympy

from trlimits.algebra import (
    FieldElement,
    NumberField,
    ParamRational,
    format_scalar,
    lift_scalar,
    scalar_to_sympy,
)
from trlimits.algebra.paramrational import specialize as specialize_scalar
from trlimits.algebra.rational import is_infinity
from trlimits.curve.model import location_key

from .basis import BasisLabel, place_text, sort_labels

SCHEMA_VERSION = 1

LabelTuple = tuple[BasisLabel, ...]


def variables(n: int) -> tuple[sympy.Symbol, ...]:
    return tuple(sympy.Symbol(f"w{i}") for i in range(n))


def _is_zero(value: Any) -> bool:
    try:
        return value == 0
    except TypeError:
        return False


def _text(value: Any) -> str:
    try:
        return format_scalar(value)
    except TypeError:
        return str(value)


@dataclass(frozen=True)
class Correlator:
    """``omega_{g,n}`` as ``sum coeffs[labels] * prod_i basis(labels[i])(w_i)``.

    Zero coefficients are never stored. ``certified`` is false when the tensor
    came out of a forced run on a curve failing local admissibility (or a
    numeric backend); ``mode`` records the residue grouping that produced it.
    """

    g: int
    n: int
    coeffs: Mapping[LabelTuple, Any]
    certified: bool = True
    mode: str = "point"
    notes: tuple[str, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.g < 0 or self.n < 1:
            raise ValueError(f"invalid correlator indices ({self.g}, {self.n})")
        if 2 * self.g - 2 + self.n <= 0:
            raise ValueError(f"({self.g}, {self.n}) is not a stable correlator")
        cleaned: dict[LabelTuple, Any] = {}
        for labels, value in self.coeffs.items():
            if len(labels) != self.n:
                raise ValueError(f"label tuple of length {len(labels)} in a {self.n}-point correlator")
            if not _is_zero(value):
                cleaned[tuple(labels)] = value
        ordered = dict(sorted(cleaned.items(), key=lambda item: sort_labels(item[0])))
        object.__setattr__(self, "coeffs", ordered)

    # -- queries --------------------------------------------------------

    @property
    def chi(self) -> int:
        return 2 * self.g - 2 + self.n

    def is_zero(self) -> bool:
        return not self.coeffs

    def labels(self) -> set[BasisLabel]:
        return {label for labels in self.coeffs for label in labels}

    def places(self) -> set[tuple[int, Any]]:
        return {label.place for label in self.labels()}

    def pole_orders(self) -> dict[tuple[int, Any], int]:
        """Largest pole order seen at each point, in any variable."""

        orders: dict[tuple[int, Any], int] = {}
        for label in self.labels():
            orders[label.place] = max(orders.get(label.place, 0), label.order)
        return orders

    def is_residue_free(self) -> bool:
        return all(label.order >= 2 for label in self.labels())

    def coefficient(self, labels: Iterable[BasisLabel]) -> Any:
        return self.coeffs.get(tuple(labels), 0)

    def symmetry_defects(self) -> list[tuple[LabelTuple, LabelTuple]]:
        """Pairs of permuted label tuples whose coefficients differ."""

        defects: list[tuple[LabelTuple, LabelTuple]] = []
        for labels, value in self.coeffs.items():
            for perm in set(itertools.permutations(labels)):
                if perm == labels:
                    continue
                other = self.coeffs.get(perm, 0)
                if not self._close(value, other):
                    defects.append((labels, perm))
        return defects

    def is_symmetric(self) -> bool:
        return not self.symmetry_defects()

    def _close(self, a: Any, b: Any) -> bool:
        if self.certified or not _numeric(a, b):
            return a == b
        return abs(a - b) <= 1e-20 * max(1, abs(a), abs(b))

    # -- transformations ------------------------------------------------

    def map_coefficients(self, func: Callable[[Any], Any]) -> "Correlator":
        return Correlator(
            self.g,
            self.n,
            {labels: func(value) for labels, value in self.coeffs.items()},
            certified=self.certified,
            mode=self.mode,
            notes=self.notes,
        )

    def map_labels(self, func: Callable[[BasisLabel], BasisLabel]) -> "Correlator":
        mapped: dict[LabelTuple, Any] = {}
        for labels, value in self.coeffs.items():
            key = tuple(func(label) for label in labels)
            mapped[key] = mapped.get(key, 0) + value
        return Correlator(self.g, self.n, mapped, certified=self.certified, mode=self.mode, notes=self.notes)

    def specialize(self, t_value: Any) -> "Correlator":
        """Coefficients (and parametric locations) evaluated at ``t = t_value``."""

        def label(item: BasisLabel) -> BasisLabel:
            if is_infinity(item.location):
                return item
            return BasisLabel(item.component, specialize_scalar(item.location, t_value), item.order)

        return self.map_coefficients(lambda v: specialize_scalar(v, t_value)).map_labels(label)

    def __sub__(self, other: "Correlator") -> "Correlator":
        if (self.g, self.n) != (other.g, other.n):
            raise ValueError("correlators of different type")
        merged = dict(self.coeffs)
        for labels, value in other.coeffs.items():
            merged[labels] = merged.get(labels, 0) - value
        return Correlator(
            self.g, self.n, merged, certified=self.certified and other.certified, mode=self.mode
        )

    def same_as(self, other: "Correlator") -> bool:
        return (self.g, self.n) == (other.g, other.n) and (self - other).is_zero()

    # -- output ---------------------------------------------------------

    def render(self, symbols: tuple[sympy.Symbol, ...] | None = None) -> sympy.Expr:
        """The coefficient of ``dw_0 ... dw_{n-1}`` as one rational function."""

        symbols = symbols or variables(self.n)
        terms = []
        for labels, value in self.coeffs.items():
            term = _to_sympy(value)
            for label, symbol in zip(labels, symbols):
                term = term * label.to_sympy(symbol)
            terms.append(term)
        return sympy.cancel(sympy.together(sympy.Add(*terms)))

    def render_text(self) -> str:
        return sympy.sstr(sympy.factor(self.render()))

    def describe(self, *, render: bool = True) -> dict[str, Any]:
        basis = sorted(self.labels(), key=BasisLabel.sort_key)
        index = {label: i for i, label in enumerate(basis)}
        payload: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "g": self.g,
            "n": self.n,
            "certified": self.certified,
            "mode": self.mode,
            "symmetric": self.is_symmetric(),
            "basis": [label.text() for label in basis],
            "coeffs": [
                {"labels": [index[label] for label in labels], "value": _text(value)}
                for labels, value in self.coeffs.items()
            ],
            "pole_orders": {
                place_text(c, loc): order
                for (c, loc), order in sorted(
                    self.pole_orders().items(), key=lambda item: (item[0][0], location_key(item[0][1]))
                )
            },
        }
        if self.notes:
            payload["notes"] = list(self.notes)
        if render and all(not _numeric(v) for v in self.coeffs.values()):
            payload["rendered"] = self.render_text()
        return payload

    def __repr__(self) -> str:
        return f"Correlator(g={self.g}, n={self.n}, terms={len(self.coeffs)}, certified={self.certified})"


def _numeric(*values: Any) -> bool:
    return any(type(v).__module__.startswith("mpmath") or isinstance(v, complex) for v in values)


def _to_sympy(value: Any) -> sympy.Expr:
    if _numeric(value):
        return sympy.sympify(complex(value))
    return scalar_to_sympy(value)


def zero_correlator(g: int, n: int, *, mode: str = "point") -> Correlator:
    return Correlator(g, n, {}, mode=mode)


def _scalars(value: Any) -> Iterable[Any]:
    if isinstance(value, ParamRational):
        yield from value.numerator
        yield from value.denominator
    else:
        yield value


def requirements(correlator: Correlator) -> tuple[set[int], set[Any]]:
    """Roots of unity and square roots needed by coefficients and label locations."""

    zetas: set[int] = set()
    squares: set[Any] = set()
    values = list(correlator.coeffs.values())
    values += [label.location for label in correlator.labels() if not label.at_infinity]
    for value in values:
        for scalar in _scalars(value):
            if isinstance(scalar, FieldElement):
                z, s = scalar.field.requirements
                zetas |= set(z)
                squares |= set(s)
    return zetas, squares


def lift_correlator(correlator: Correlator, target: NumberField) -> Correlator:
    """The same tensor with every scalar re-expressed in ``target``."""

    def label(item: BasisLabel) -> BasisLabel:
        if item.at_infinity:
            return item
        return BasisLabel(item.component, lift_scalar(item.location, target), item.order)

    return correlator.map_coefficients(lambda v: lift_scalar(v, target)).map_labels(label)


def correlators_agree(a: Correlator, b: Correlator) -> bool:
    """Exact equality of two tensors computed over possibly different fields."""

    if (a.g, a.n) != (b.g, b.n):
        return False
    za, sa = requirements(a)
    zb, sb = requirements(b)
    target = NumberField.build(roots_of_unity=za | zb, square_roots=sa | sb)
    return lift_correlator(a, target).same_as(lift_correlator(b, target))


__all__ = [
    "Correlator",
    "LabelTuple",
    "SCHEMA_VERSION",
    "correlators_agree",
    "lift_correlator",
    "requirements",
    "variables",
    "zero_correlator",
]
