"""Truncated Laurent series with a guaranteed window.

A series stores the coefficients of ``u**lo ... u**hi``. Everything below ``lo``
is known to vanish and everything above ``hi`` is unknown, unless the series is
``exact`` (a Laurent polynomial), in which case the tail is known to vanish too.
Arithmetic propagates the window conservatively and anything that would need an
unknown coefficient raises :class:`InsufficientPrecisionError`.

After construction, leading zeros are dropped, so ``lo`` is the valuation
whenever the series has a known non-zero coefficient. A non-exact series with no
known non-zero coefficient is *possibly zero*: its valuation is undefined and
queries about it fail loudly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping

from trlimits.algebra.rational import as_scalar, divide
from trlimits.algebra.roots import principal_root
from trlimits.errors import DomainError, InsufficientPrecisionError

Exponent = int | float


@dataclass(frozen=True, slots=True)
class LaurentSeries:
    lo: int
    coeffs: tuple[Any, ...]
    exact: bool = False

    def __post_init__(self) -> None:
        values = [as_scalar(c) for c in self.coeffs]
        lo = self.lo
        start = 0
        while start < len(values) and values[start] == 0:
            start += 1
        values = values[start:]
        lo += start
        if self.exact:
            while values and values[-1] == 0:
                values.pop()
            if not values:
                lo = 0
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "coeffs", tuple(values))

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentSeries":
        return cls(0, (), exact=True)

    @classmethod
    def unknown_from(cls, exponent: int) -> "LaurentSeries":
        """``O(u**exponent)``: zero below ``exponent``, unknown from it on."""

        return cls(exponent, (), exact=False)

    @classmethod
    def monomial(cls, exponent: int, coeff: Any = 1) -> "LaurentSeries":
        return cls(exponent, (coeff,), exact=True)

    @classmethod
    def constant(cls, value: Any) -> "LaurentSeries":
        return cls(0, (value,), exact=True)

    @classmethod
    def from_coefficients(
        cls, coeffs: Mapping[int, Any], *, hi: int | None = None
    ) -> "LaurentSeries":
        """Series from a sparse map; ``hi=None`` means exact."""

        keys = [k for k, v in coeffs.items() if v != 0]
        if not keys:
            return cls.zero() if hi is None else cls.unknown_from(hi + 1)
        lo = min(keys)
        top = max(keys) if hi is None else hi
        if hi is not None and lo > hi:
            return cls.unknown_from(hi + 1)
        dense = [coeffs.get(k, Fraction(0)) for k in range(lo, top + 1)]
        return cls(lo, tuple(dense), exact=hi is None)

    # -- window -------------------------------------------------------

    @property
    def hi(self) -> Exponent:
        """Largest exponent whose coefficient is guaranteed (``inf`` if exact)."""

        if self.exact:
            return math.inf
        return self.lo + len(self.coeffs) - 1

    @property
    def end(self) -> int:
        """Largest stored exponent."""

        return self.lo + len(self.coeffs) - 1

    def is_exact_zero(self) -> bool:
        return self.exact and not self.coeffs

    def is_possibly_zero(self) -> bool:
        return not self.coeffs and not self.exact

    def coefficient(self, exponent: int) -> Any:
        if exponent < self.lo:
            return Fraction(0)
        if exponent > self.hi:
            raise InsufficientPrecisionError(
                "coefficient outside the known window", needed=exponent, known=int(self.hi)
            )
        index = exponent - self.lo
        if index >= len(self.coeffs):
            return Fraction(0)
        return self.coeffs[index]

    def valuation(self) -> Exponent:
        if self.coeffs:
            return self.lo
        if self.exact:
            return math.inf
        raise InsufficientPrecisionError(
            "series is possibly zero", needed=self.lo, known=self.lo - 1
        )

    def leading(self) -> Any:
        if not self.coeffs:
            self.valuation()
            raise DomainError("the zero series has no leading coefficient")
        return self.coeffs[0]

    def relative_precision(self) -> int:
        """Number of known coefficients from the valuation on."""

        if self.exact:
            raise DomainError("exact series have unbounded precision")
        return len(self.coeffs)

    def truncate(self, hi: int) -> "LaurentSeries":
        """Forget coefficients above ``hi``."""

        if hi >= self.hi:
            return self
        if hi < self.lo:
            return LaurentSeries.unknown_from(hi + 1)
        return LaurentSeries(self.lo, self.coeffs[: hi - self.lo + 1], exact=False)

    def with_precision(self, hi: int) -> "LaurentSeries":
        """An exact series seen as known up to ``hi`` (padded with zeros)."""

        if not self.exact:
            return self.truncate(hi)
        if not self.coeffs or hi < self.lo:
            return LaurentSeries.unknown_from(hi + 1)
        padded = list(self.coeffs[: hi - self.lo + 1])
        padded += [Fraction(0)] * (hi - self.lo + 1 - len(padded))
        return LaurentSeries(self.lo, tuple(padded), exact=False)

    def items(self) -> Iterable[tuple[int, Any]]:
        for i, c in enumerate(self.coeffs):
            if c != 0:
                yield self.lo + i, c

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality on the common guaranteed window."""

        top = min(self.hi, other.hi)
        start = min(self.lo, other.lo)
        if top == math.inf:
            top = max(self.end, other.end)
        for k in range(start, int(top) + 1):
            if self.coefficient(k) != other.coefficient(k):
                return False
        return True

    def map_coefficients(self, func: Callable[[Any], Any]) -> "LaurentSeries":
        return LaurentSeries(self.lo, tuple(func(c) for c in self.coeffs), exact=self.exact)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: Any) -> "LaurentSeries":
        other = _as_series(other)
        if self.is_exact_zero():
            return other
        if other.is_exact_zero():
            return self
        hi = min(self.hi, other.hi)
        starts = [s.lo for s in (self, other) if s.coeffs]
        if not starts:
            return LaurentSeries.unknown_from(int(hi) + 1)
        lo = min(starts)
        if hi == math.inf:
            top = max(self.end, other.end)
        else:
            top = int(hi)
        if top < lo:
            return LaurentSeries.unknown_from(top + 1)
        out = [Fraction(0)] * (top - lo + 1)
        for series in (self, other):
            for i, c in enumerate(series.coeffs):
                k = series.lo + i - lo
                if 0 <= k < len(out):
                    out[k] = out[k] + c
        return LaurentSeries(lo, tuple(out), exact=hi == math.inf)

    __radd__ = __add__

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.lo, tuple(-c for c in self.coeffs), exact=self.exact)

    def __sub__(self, other: Any) -> "LaurentSeries":
        return self + (-_as_series(other))

    def __rsub__(self, other: Any) -> "LaurentSeries":
        return _as_series(other) + (-self)

    def scale(self, factor: Any) -> "LaurentSeries":
        factor = as_scalar(factor)
        if factor == 0:
            return LaurentSeries.zero()
        if factor == 1:
            return self
        return LaurentSeries(self.lo, tuple(c * factor for c in self.coeffs), exact=self.exact)

    def shift(self, exponent: int) -> "LaurentSeries":
        """Multiply by ``u**exponent``."""

        if not self.coeffs:
            return self if self.exact else LaurentSeries.unknown_from(self.lo + exponent)
        return LaurentSeries(self.lo + exponent, self.coeffs, exact=self.exact)

    def __mul__(self, other: Any) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        if self.is_exact_zero() or other.is_exact_zero():
            return LaurentSeries.zero()
        lo = self.lo + other.lo
        hi = min(self.hi + other.lo, other.hi + self.lo)
        if hi == math.inf:
            top = self.end + other.end
        else:
            top = int(hi)
        if top < lo or not self.coeffs or not other.coeffs:
            return LaurentSeries.unknown_from(top + 1)
        size = top - lo + 1
        out: list[Any] = [Fraction(0)] * size
        a, b = self.coeffs, other.coeffs
        for i in range(min(len(a), size)):
            x = a[i]
            if x == 0:
                continue
            limit = min(len(b), size - i)
            for j in range(limit):
                y = b[j]
                if y == 0:
                    continue
                out[i + j] = out[i + j] + x * y
        return LaurentSeries(lo, tuple(out), exact=hi == math.inf)

    def __rmul__(self, other: Any) -> "LaurentSeries":
        return self.scale(other)

    def inverse(self, terms: int | None = None) -> "LaurentSeries":
        """Multiplicative inverse; relative precision is preserved."""

        lead = self.leading()
        if self.exact and len(self.coeffs) == 1:
            return LaurentSeries.monomial(-self.lo, divide(1, lead))
        n = self._relative_terms(terms)
        inv_lead = divide(1, lead)
        a = self.coeffs
        out: list[Any] = [inv_lead]
        for k in range(1, n):
            acc: Any = Fraction(0)
            for j in range(1, min(k, len(a) - 1) + 1):
                if a[j] != 0:
                    acc = acc + a[j] * out[k - j]
            out.append(-acc * inv_lead)
        return LaurentSeries(-self.lo, tuple(out), exact=False)

    def __truediv__(self, other: Any) -> "LaurentSeries":
        if not isinstance(other, LaurentSeries):
            return self.scale(divide(1, as_scalar(other)))
        return self * other.inverse()

    def __pow__(self, exponent: int) -> "LaurentSeries":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = LaurentSeries.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def _relative_terms(self, terms: int | None) -> int:
        if terms is not None:
            if self.exact:
                return terms
            return min(terms, len(self.coeffs))
        if self.exact:
            raise DomainError("an explicit number of terms is needed for an exact series")
        return len(self.coeffs)

    # -- calculus -----------------------------------------------------

    def derivative(self) -> "LaurentSeries":
        if not self.coeffs:
            return self if self.exact else LaurentSeries.unknown_from(self.lo - 1)
        out = [(self.lo + i) * c for i, c in enumerate(self.coeffs)]
        return LaurentSeries(self.lo - 1, tuple(out), exact=self.exact)

    def residue(self) -> Any:
        """Coefficient of ``u**-1``."""

        return self.coefficient(-1)

    # -- composition --------------------------------------------------

    def substitute_power(self, factor: Any, power: int) -> "LaurentSeries":
        """``f(factor * u**power)`` for a positive integer ``power``."""

        if power < 1:
            raise DomainError("substitution power must be positive")
        factor = as_scalar(factor)
        if not self.coeffs:
            if self.exact:
                return self
            return LaurentSeries.unknown_from(power * self.lo)
        mapping: dict[int, Any] = {}
        scale_power = factor ** self.lo if self.lo >= 0 else divide(1, factor ** (-self.lo))
        for i, c in enumerate(self.coeffs):
            if c != 0:
                mapping[power * (self.lo + i)] = c * scale_power
            scale_power = scale_power * factor
        if self.exact:
            return LaurentSeries.from_coefficients(mapping)
        return LaurentSeries.from_coefficients(mapping, hi=power * (int(self.hi) + 1) - 1)

    def compose(self, inner: "LaurentSeries") -> "LaurentSeries":
        """``f(inner(u))`` for ``inner`` of positive valuation."""

        m = inner.valuation()
        if m < 1:
            raise DomainError("composition needs an inner series of positive valuation")
        if not self.coeffs:
            if self.exact:
                return self
            return LaurentSeries.unknown_from(int(m) * self.lo)
        acc: LaurentSeries = LaurentSeries.zero()
        for c in reversed(self.coeffs):
            acc = acc * inner + LaurentSeries.constant(c)
        acc = acc * (inner ** self.lo)
        if not self.exact:
            acc = acc.truncate((int(self.hi) + 1) * int(m) - 1)
        return acc

    def reverse(self, terms: int | None = None) -> "LaurentSeries":
        """Compositional inverse of a series ``a1*u + a2*u**2 + ...``, ``a1 != 0``."""

        if self.valuation() != 1:
            raise DomainError("series reversion needs valuation exactly 1")
        if self.exact and len(self.coeffs) == 1:
            return LaurentSeries.monomial(1, divide(1, self.coeffs[0]))
        n = self._relative_terms(terms)
        h = self.shift(-1)
        h = h.with_precision(n - 1) if self.exact else h.truncate(n - 1)
        h_inv = h.inverse()
        power = LaurentSeries.constant(1)
        out: dict[int, Any] = {}
        for k in range(1, n + 1):
            power = power * h_inv
            out[k] = divide(power.coefficient(k - 1), k)
        return LaurentSeries.from_coefficients(out, hi=n)

    def rth_root(self, r: int, *, root: Any = None, terms: int | None = None) -> "LaurentSeries":
        """The r-th root whose leading coefficient is ``root`` (principal by default)."""

        if r < 1:
            raise DomainError("root order must be positive")
        if r == 1:
            return self
        lead = self.leading()
        if self.lo % r:
            raise DomainError(f"leading exponent {self.lo} is not divisible by {r}")
        if root is None:
            root = principal_root(lead, r)
        elif root**r != lead:
            raise DomainError("supplied root does not match the leading coefficient")
        if self.exact and len(self.coeffs) == 1:
            return LaurentSeries.monomial(self.lo // r, root)
        n = self._relative_terms(terms)
        inv_lead = divide(1, lead)
        f = [c * inv_lead for c in self.coeffs[:n]]
        f += [Fraction(0)] * (n - len(f))
        alpha = Fraction(1, r)
        b: list[Any] = [Fraction(1)]
        for k in range(1, n):
            acc: Any = Fraction(0)
            for j in range(1, k + 1):
                if f[j] != 0:
                    acc = acc + ((alpha + 1) * j - k) * f[j] * b[k - j]
            b.append(divide(acc, k))
        return LaurentSeries(self.lo // r, tuple(c * root for c in b), exact=False)

    def __repr__(self) -> str:
        from trlimits.algebra.text import format_scalar

        terms = []
        for k, c in self.items():
            terms.append(f"({format_scalar(c)})*u^{k}")
        body = " + ".join(terms) if terms else "0"
        if self.exact:
            return f"LaurentSeries({body})"
        return f"LaurentSeries({body} + O(u^{int(self.hi) + 1}))"


def _as_series(value: Any) -> LaurentSeries:
    if isinstance(value, LaurentSeries):
        return value
    return LaurentSeries.constant(as_scalar(value))


__all__ = ["LaurentSeries"]
