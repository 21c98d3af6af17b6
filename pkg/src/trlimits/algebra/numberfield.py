"""Abelian number fields: cyclotomic fields and their compositum with square roots.

A field is presented as Q[x]/(m(x)) for the minimal polynomial ``m`` of a
primitive element ``theta``. Elements are residues of degree < deg m with
``Fraction`` coefficients, so equality is decided on the canonical residue.
Every field used here sits inside some Q(zeta_N): roots of unity are needed for
deck transformations and square roots of rationals for quadratic ramification
points, and both generate subfields of cyclotomic fields.

Elements with vanishing irrational part are returned as plain ``Fraction``
objects, which keeps mixed rational/algebraic arithmetic canonical.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Any, Iterable, Mapping, Sequence

import mpmath
import sympy

from trlimits.errors import DomainError, FieldExtensionRequiredError

from .rational import format_fraction, rational_root, squarefree_decomposition

_X = sympy.Symbol("x")

Coeffs = tuple[Fraction, ...]


def _trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    a = _trim(list(a))
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    quotient = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        factor = a[-1] / lead
        quotient[shift] = factor
        for i, coeff in enumerate(b):
            a[shift + i] -= factor * coeff
        a.pop()
        _trim(a)
    return quotient, a


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] += x * y
    return out


def _poly_sub(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    size = max(len(a), len(b))
    out = [Fraction(0)] * size
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _trim(out)


def _inverse_mod(a: Sequence[Fraction], m: Sequence[Fraction]) -> list[Fraction]:
    """Inverse of ``a`` modulo the irreducible ``m`` by the extended Euclid algorithm."""

    r0, r1 = list(m), _trim(list(a))
    s0: list[Fraction] = []
    s1: list[Fraction] = [Fraction(1)]
    while len(r1) > 1:
        q, r = _poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    inv_lead = 1 / r1[0]
    return [c * inv_lead for c in s1]


def _sympy_rational(value: Any) -> Fraction:
    value = sympy.nsimplify(value) if not isinstance(value, sympy.Rational) else value
    if not isinstance(value, sympy.Rational):
        raise DomainError(f"expected a rational number, got {value}")
    return Fraction(int(value.p), int(value.q))


def _conductor(d: int) -> int:
    return abs(d) if d % 4 == 1 else 4 * abs(d)


class NumberField:
    """Q(theta) with theta a primitive element of Q(zeta_N1, ..., sqrt(D1), ...).

    Build instances with :meth:`build` (cached, so equal requirements give the same
    object) or :meth:`rationals`.
    """

    def __init__(
        self,
        *,
        modulus: Sequence[Fraction],
        theta: sympy.Expr,
        roots_of_unity: Mapping[int, Coeffs],
        square_roots: Mapping[int, Coeffs],
        symbol: str,
    ) -> None:
        modulus = [Fraction(c) for c in modulus]
        lead = modulus[-1]
        self.modulus: Coeffs = tuple(c / lead for c in modulus)
        self.degree = len(self.modulus) - 1
        self.theta = theta
        self.symbol = symbol
        self._roots_of_unity = dict(roots_of_unity)
        self._square_roots = dict(square_roots)
        self._reduction = self._reduction_table()
        self._embeddings: dict[int, Any] = {}

    # -- construction -------------------------------------------------

    @classmethod
    def rationals(cls) -> "NumberField":
        return cls.build()

    @classmethod
    def cyclotomic(cls, conductor: int) -> "NumberField":
        return cls.build(roots_of_unity=(conductor,))

    @classmethod
    def build(
        cls,
        *,
        roots_of_unity: Iterable[int] = (),
        square_roots: Iterable[int | Fraction] = (),
    ) -> "NumberField":
        zetas, radicands = _normalize_requirements(roots_of_unity, square_roots)
        return _build_field(zetas, radicands)

    def extended(
        self,
        *,
        roots_of_unity: Iterable[int] = (),
        square_roots: Iterable[int | Fraction] = (),
    ) -> "NumberField":
        return NumberField.build(
            roots_of_unity=(*self._roots_of_unity, *roots_of_unity),
            square_roots=(*self._square_roots, *square_roots),
        )

    @property
    def requirements(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        return tuple(sorted(self._roots_of_unity)), tuple(sorted(self._square_roots))

    def _reduction_table(self) -> list[Coeffs]:
        d = self.degree
        table: list[Coeffs] = []
        if d <= 1:
            return table
        current = [-c for c in self.modulus[:-1]]
        table.append(tuple(current))
        for _ in range(d - 2):
            top = current[-1]
            shifted = [Fraction(0)] + current[:-1]
            current = [shifted[i] - top * self.modulus[i] for i in range(d)]
            table.append(tuple(current))
        return table

    # -- elements -----------------------------------------------------

    def element(self, coeffs: Sequence[Fraction | int]) -> Any:
        """Residue with the given coefficients in powers of theta (low to high)."""

        values = [Fraction(c) for c in coeffs]
        if len(values) > 2 * self.degree - 1:
            _, values = _poly_divmod(values, list(self.modulus))
        elif len(values) > self.degree:
            values = self._reduce(values)
        values += [Fraction(0)] * (self.degree - len(values))
        return self._make(tuple(values))

    def _make(self, coeffs: Coeffs) -> Any:
        if self.degree <= 1 or not any(coeffs[1:]):
            return coeffs[0] if coeffs else Fraction(0)
        return FieldElement(self, coeffs)

    def _reduce(self, values: list[Fraction]) -> list[Fraction]:
        d = self.degree
        low = list(values[:d]) + [Fraction(0)] * max(d - len(values), 0)
        for k in range(d, len(values)):
            coeff = values[k]
            if coeff == 0:
                continue
            row = self._reduction[k - d]
            for i in range(d):
                if row[i]:
                    low[i] += coeff * row[i]
        return low

    def generator(self) -> Any:
        if self.degree <= 1:
            raise DomainError("the rational field has no generator")
        return self.element([0, 1])

    def zeta(self, order: int) -> Any:
        """The root of unity exp(2 pi i / order) as an element of this field."""

        if order < 1:
            raise DomainError("root-of-unity order must be positive")
        if order == 1:
            return Fraction(1)
        if order == 2:
            return Fraction(-1)
        for big, coeffs in self._roots_of_unity.items():
            if big % order == 0:
                return self._make(coeffs) ** (big // order)
            if big % 2 == 1 and (2 * big) % order == 0:
                doubled = -(self._make(coeffs) ** ((big + 1) // 2))
                return doubled ** (2 * big // order)
        if order == 4:
            root = self._square_roots.get(-1)
            if root is not None:
                return self._make(root)
        if order in (3, 6) and -3 in self._square_roots:
            i_sqrt3 = self._make(self._square_roots[-3])
            omega = (Fraction(-1) + i_sqrt3) / 2
            return omega if order == 3 else -omega * omega
        raise FieldExtensionRequiredError(
            f"exp(2*pi*I/{order}) is not in the active field", polynomial=f"x^{order} - 1"
        )

    def has_zeta(self, order: int) -> bool:
        try:
            self.zeta(order)
        except FieldExtensionRequiredError:
            return False
        return True

    def sqrt(self, value: int | Fraction) -> Any:
        """A square root of a rational: positive for positive input, i*sqrt(|D|) otherwise."""

        value = Fraction(value)
        if value == 0:
            return Fraction(0)
        exact = rational_root(value, 2)
        if exact is not None:
            return exact
        f_num, d_num = squarefree_decomposition(value.numerator * value.denominator)
        scale = Fraction(f_num, value.denominator)
        coeffs = self._square_roots.get(d_num)
        if coeffs is not None:
            return scale * self._make(coeffs)
        if d_num == -1 and self.has_zeta(4):
            return scale * self.zeta(4)
        for big in self._roots_of_unity:
            if big % _conductor(d_num) == 0:
                return scale * self.from_sympy(sympy.sqrt(d_num))
        raise FieldExtensionRequiredError(
            f"sqrt({d_num}) is not in the active field", polynomial=f"x^2 - ({d_num})"
        )

    def from_sympy(self, expr: Any) -> Any:
        """Convert an algebraic sympy number lying in this field."""

        expr = sympy.sympify(expr)
        if expr.is_Rational:
            return Fraction(int(expr.p), int(expr.q))
        if self.degree <= 1:
            raise FieldExtensionRequiredError(f"{expr} is not rational")
        try:
            image = sympy.to_number_field(expr, self.theta)
        except (sympy.polys.polyerrors.IsomorphismFailed, ValueError, NotImplementedError) as exc:
            raise FieldExtensionRequiredError(f"{expr} is not in the active field") from exc
        coeffs = [_sympy_rational(c) for c in reversed(image.coeffs())]
        return self.element(coeffs)

    def embedding(self, dps: int) -> Any:
        """Complex value of theta under the fixed embedding, at ``dps`` digits."""

        if dps not in self._embeddings:
            value = sympy.N(self.theta, dps + 10)
            re_part, im_part = value.as_real_imag()
            with mpmath.workdps(dps + 10):
                self._embeddings[dps] = mpmath.mpc(
                    mpmath.mpf(str(re_part)), mpmath.mpf(str(im_part))
                )
        return self._embeddings[dps]

    def __repr__(self) -> str:
        zetas, roots = self.requirements
        return f"NumberField(degree={self.degree}, zeta={zetas}, sqrt={roots})"


class FieldElement:
    """Irrational element of a :class:`NumberField` (rationals are plain ``Fraction``)."""

    __slots__ = ("field", "coeffs", "_hash")

    def __init__(self, field: NumberField, coeffs: Coeffs) -> None:
        self.field = field
        self.coeffs = coeffs
        self._hash: int | None = None

    def _coerce(self, other: Any) -> "FieldElement | Fraction | None":
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise DomainError("cannot mix elements of different number fields")
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Fraction(other)
        return None

    def __add__(self, other: Any) -> Any:
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        if isinstance(value, Fraction):
            return self.field._make((self.coeffs[0] + value,) + self.coeffs[1:])
        return self.field._make(tuple(a + b for a, b in zip(self.coeffs, value.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field, tuple(-c for c in self.coeffs))

    def __sub__(self, other: Any) -> Any:
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        return self + (-value)

    def __rsub__(self, other: Any) -> Any:
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        return (-self) + value

    def __mul__(self, other: Any) -> Any:
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        if isinstance(value, Fraction):
            if value == 0:
                return Fraction(0)
            return FieldElement(self.field, tuple(c * value for c in self.coeffs))
        product = _poly_mul(self.coeffs, value.coeffs)
        return self.field._make(tuple(self.field._reduce(product)))

    __rmul__ = __mul__

    def inverse(self) -> Any:
        inv = _inverse_mod(self.coeffs, self.field.modulus)
        return self.field.element(inv)

    def __truediv__(self, other: Any) -> Any:
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        if isinstance(value, Fraction):
            if value == 0:
                raise ZeroDivisionError("division by zero")
            return FieldElement(self.field, tuple(c / value for c in self.coeffs))
        return self * value.inverse()

    def __rtruediv__(self, other: Any) -> Any:
        value = self._coerce(other)
        if value is None:
            return NotImplemented
        return self.inverse() * value

    def __pow__(self, exponent: int) -> Any:
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result: Any = Fraction(1)
        base: Any = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, FieldElement):
            return self.field is other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return False
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((id(self.field), self.coeffs))
        return self._hash

    def __bool__(self) -> bool:
        return True

    def to_complex(self, dps: int = 30) -> Any:
        theta = self.field.embedding(dps)
        with mpmath.workdps(dps + 10):
            total = mpmath.mpc(0)
            power = mpmath.mpc(1)
            for coeff in self.coeffs:
                if coeff:
                    total += mpmath.mpf(coeff.numerator) / coeff.denominator * power
                power *= theta
            return total

    def __repr__(self) -> str:
        return format_field_element(self)


def format_field_element(value: FieldElement) -> str:
    symbol = value.field.symbol
    parts: list[str] = []
    for power in range(len(value.coeffs) - 1, -1, -1):
        coeff = value.coeffs[power]
        if coeff == 0:
            continue
        sign = "-" if coeff < 0 else "+"
        magnitude = abs(coeff)
        if power == 0:
            body = format_fraction(magnitude)
        else:
            monomial = symbol if power == 1 else f"{symbol}^{power}"
            body = monomial if magnitude == 1 else f"{format_fraction(magnitude)}*{monomial}"
        parts.append(f"{sign} {body}")
    text = " ".join(parts)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _normalize_requirements(
    roots_of_unity: Iterable[int], square_roots: Iterable[int | Fraction]
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    zetas = {int(n) for n in roots_of_unity if int(n) > 2}
    zetas = {n for n in zetas if not any(m != n and m % n == 0 for m in zetas)}
    radicands: set[int] = set()
    for value in square_roots:
        q = Fraction(value)
        if q == 0 or rational_root(q, 2) is not None:
            continue
        _, d = squarefree_decomposition(q.numerator * q.denominator)
        if d == 1:
            continue
        if any(n % _conductor(d) == 0 for n in zetas):
            continue
        radicands.add(d)
    return tuple(sorted(zetas)), tuple(sorted(radicands))


@lru_cache(maxsize=64)
def _build_field(zetas: tuple[int, ...], radicands: tuple[int, ...]) -> NumberField:
    generators: list[sympy.Expr] = [sympy.exp(2 * sympy.pi * sympy.I / n) for n in zetas]
    generators += [sympy.sqrt(d) for d in radicands]

    if not generators:
        return NumberField(
            modulus=(Fraction(0), Fraction(1)),
            theta=sympy.Integer(0),
            roots_of_unity={},
            square_roots={},
            symbol="q",
        )

    if len(generators) == 1:
        theta = generators[0]
        minpoly = sympy.minimal_polynomial(theta, _X)
        symbol = f"z{zetas[0]}" if zetas else f"r{abs(radicands[0])}" + ("i" if radicands[0] < 0 else "")
    else:
        minpoly, weights = sympy.primitive_element(generators, _X)
        theta = sympy.Add(*(w * g for w, g in zip(weights, generators)))
        symbol = "th"

    poly = sympy.Poly(minpoly, _X)
    modulus = [_sympy_rational(c) for c in reversed(poly.all_coeffs())]
    field = NumberField(
        modulus=modulus,
        theta=theta,
        roots_of_unity={},
        square_roots={},
        symbol=symbol,
    )

    roots: dict[int, Coeffs] = {}
    for n, expr in zip(zetas, generators):
        roots[n] = _coefficients_in(field, expr, len(generators) == 1)
    squares: dict[int, Coeffs] = {}
    for d, expr in zip(radicands, generators[len(zetas):]):
        squares[d] = _coefficients_in(field, expr, len(generators) == 1)
    field._roots_of_unity = roots
    field._square_roots = squares
    return field


def _coefficients_in(field: NumberField, expr: sympy.Expr, is_theta: bool) -> Coeffs:
    if is_theta:
        coeffs = [Fraction(0)] * field.degree
        coeffs[1] = Fraction(1)
        return tuple(coeffs)
    image = sympy.to_number_field(expr, field.theta)
    values = [_sympy_rational(c) for c in reversed(image.coeffs())]
    values += [Fraction(0)] * (field.degree - len(values))
    return tuple(values)


def field_of(*values: Any) -> NumberField | None:
    """The number field shared by the given scalars, or ``None`` if all are rational."""

    found: NumberField | None = None
    for value in values:
        if isinstance(value, FieldElement):
            if found is not None and value.field is not found:
                raise DomainError("scalars from different number fields")
            found = value.field
    return found


def lcm_all(values: Iterable[int]) -> int:
    result = 1
    for value in values:
        result = math.lcm(result, value)
    return result


__all__ = [
    "FieldElement",
    "NumberField",
    "field_of",
    "format_field_element",
    "lcm_all",
]
