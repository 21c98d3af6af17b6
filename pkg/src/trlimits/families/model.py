"""One-parameter families of genus-0 spectral curves over the rational line of ``t``.

A family is a pair of rational functions of ``(w, t)``. The fibre at a rational
``t`` is an ordinary :class:`SpectralCurve`; fibres in the bad set (where
ramification points or branch values collide, or degrees drop) are refused.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from dataclasses import field as dc_field
from fractions import Fraction
from functools import cached_property
from typing import Any, Mapping, Sequence

import sympy

from trlimits.algebra import ParamRational, T, as_scalar, parse_expression, parse_scalar, scalar_to_sympy
from trlimits.curve import SpectralCurve, curve_from_expressions
from trlimits.errors import DomainError, FiberInvalidError, InvalidCurveError, ParseError, TransalgebraicCurveError
from trlimits.polygon import rs_delta_max
from trlimits.runtime.telemetry import record_event, span
from trlimits.series import W

LOGGER_NAME = "trlimits.families"

CASES = ("F+", "F-", "F+-", "rs+1", "chebyshev", "singular", "norbury", "custom")

# distinct constants for the full-degree slices used by the profile tables
_L_ROOTS = (1, 3, 7, 13, 19, 29, 37, 43)
_R_ROOTS = (2, 5, 11, 17, 23, 31, 41, 47)

_SCALE = sympy.Symbol("lambda_", positive=True)


def _as_expr(value: Any) -> sympy.Expr:
    return sympy.sympify(value)


def _check_rational(expr: sympy.Expr, role: str) -> None:
    if expr.has(sympy.log, sympy.exp, sympy.LambertW):
        raise TransalgebraicCurveError(f"{role} = {expr} is transalgebraic (logarithm in x)")
    extra = expr.free_symbols - {W, T}
    if extra:
        raise InvalidCurveError(f"{role} uses symbols {sorted(map(str, extra))} besides w and t")
    if not expr.is_rational_function(W, T):
        raise InvalidCurveError(f"{role} = {expr} is not rational in w and t")


def _t_sympy(t_value: Any) -> sympy.Expr:
    if isinstance(t_value, sympy.Basic):
        return t_value
    if isinstance(t_value, str):
        t_value = parse_scalar(t_value)
    return scalar_to_sympy(as_scalar(t_value))


@dataclass(frozen=True, slots=True)
class Homogeneity:
    """``x(lw, l^a t) = l^alpha x(w, t)`` and ``y(lw, l^a t) = l^beta y(w, t)``."""

    t_weight: int
    x_weight: int
    y_weight: int

    def scale(self) -> ParamRational:
        """The factor ``l`` with ``l^a = t``, for ``a = +-1``."""

        t = ParamRational.variable()
        return t if self.t_weight == 1 else t.inverse()

    def describe(self) -> dict[str, int]:
        return {"t": self.t_weight, "x": self.x_weight, "y": self.y_weight}


def _scaling_exponent(expr: sympy.Expr, t_weight: int) -> int | None:
    scaled = expr.subs({W: _SCALE * W, T: _SCALE**t_weight * T}, simultaneous=True)
    ratio = sympy.cancel(scaled / expr)
    if ratio == 1:
        return 0
    if ratio.free_symbols != {_SCALE}:
        return None
    base, exponent = ratio.as_base_exp()
    if base == _SCALE and exponent.is_Integer:
        return int(exponent)
    return None


@dataclass(frozen=True)
class BadSet:
    """Parameter values whose fibre is not a valid member of the family.

    ``factors`` are irreducible polynomials in ``t`` with their reason;
    ``values`` are the rational roots among them.
    """

    factors: tuple[tuple[sympy.Expr, str], ...] = ()
    values: tuple[Fraction, ...] = ()

    def contains(self, t_value: Any) -> bool:
        value = _t_sympy(t_value)
        return any(sympy.simplify(factor.subs(T, value)) == 0 for factor, _ in self.factors)

    def reasons(self, t_value: Any) -> list[str]:
        value = _t_sympy(t_value)
        return sorted({reason for factor, reason in self.factors if sympy.simplify(factor.subs(T, value)) == 0})

    def describe(self) -> dict[str, Any]:
        return {
            "values": [str(v) for v in self.values],
            "factors": [{"factor": sympy.sstr(f), "reason": reason} for f, reason in self.factors],
        }


def _leading(expr: sympy.Expr) -> sympy.Expr:
    return sympy.Poly(expr, W).LC()


def _squarefree(expr: sympy.Expr) -> sympy.Expr:
    if T in expr.free_symbols:
        return sympy.sqf_part(expr, W, T)
    return sympy.sqf_part(expr)


def compute_bad_set(x: sympy.Expr, y: sympy.Expr) -> BadSet:
    """Discriminants, resultants and leading coefficients of the family in ``w``."""

    xn, xd = sympy.fraction(sympy.cancel(x))
    yn, yd = sympy.fraction(sympy.cancel(y))
    dn = sympy.fraction(sympy.cancel(sympy.diff(x, W)))[0]
    pieces: list[tuple[sympy.Expr, str]] = [
        (_leading(xn), "degree of x drops"),
        (_leading(xd), "degree of x drops"),
        (_leading(yn), "degree of y drops"),
        (_leading(yd), "degree of y drops"),
        (_leading(dn), "a ramification point escapes to infinity"),
        (sympy.resultant(xn, xd, W), "a zero and a pole of x collide"),
        (sympy.resultant(yn, yd, W), "a zero and a pole of y collide"),
    ]
    reduced = _squarefree(dn)
    for target, reason in (
        (xd, "a ramification point meets a pole of x"),
        (yd, "a ramification point meets a pole of y"),
        (yn, "a ramification point meets a zero of y"),
    ):
        # points sitting on a pole or zero for every t are part of the family's type
        rest = sympy.quo(reduced, sympy.gcd(reduced, target), W)
        pieces.append((sympy.resultant(rest, target, W), reason))
    if sympy.degree(reduced, W) >= 2:
        pieces.append((sympy.discriminant(reduced, W), "ramification points collide"))
    branch = sympy.Symbol("X")
    image = sympy.resultant(reduced, sympy.expand(xn - branch * xd), W)
    if sympy.degree(image, branch) >= 2:
        image = sympy.sqf_part(image, branch, *sorted(image.free_symbols - {branch}, key=str))
        pieces.append((sympy.discriminant(image, branch), "branch values collide"))

    factors: list[tuple[sympy.Expr, str]] = []
    seen: set[sympy.Expr] = set()
    for piece, reason in pieces:
        piece = sympy.expand(piece)
        if piece == 0:
            record_event(
                "family.bad_set_degenerate",
                level="warning",
                data={"reason": reason},
                logger_name=LOGGER_NAME,
            )
            continue
        if T not in piece.free_symbols:
            continue
        for factor, _ in sympy.factor_list(piece, T)[1]:
            monic = sympy.Poly(factor, T).monic().as_expr()
            if monic not in seen:
                seen.add(monic)
                factors.append((monic, reason))
    values = sorted(
        {
            Fraction(int(root.p), int(root.q))
            for factor, _ in factors
            if sympy.degree(factor, T) == 1
            for root in sympy.solve(factor, T)
            if root.is_Rational
        }
    )
    return BadSet(tuple(factors), tuple(values))


@dataclass(frozen=True)
class FamilySpec:
    """A family ``(x_t, y_t)`` of genus-0 curves with central fibre at ``t = 0``.

    ``central_components`` overrides the naive ``t = 0`` substitution; a pair with
    ``y = None`` there is a horizontal component and is dropped from the central
    curve. ``L`` and ``R`` are kept for families built from deformation data.
    """

    x: sympy.Expr
    y: sympy.Expr
    name: str = "family"
    case: str = "custom"
    r: int | None = None
    s: int | None = None
    L: sympy.Expr | None = None
    R: sympy.Expr | None = None
    reparametrization: str | None = None
    central_components: tuple[tuple[sympy.Expr, sympy.Expr | None], ...] = dc_field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", sympy.cancel(_as_expr(self.x)))
        object.__setattr__(self, "y", sympy.cancel(_as_expr(self.y)))
        if self.case not in CASES:
            raise ValueError(f"unknown family case {self.case!r}")
        _check_rational(self.x, "x")
        _check_rational(self.y, "y")
        if W not in self.x.free_symbols:
            raise InvalidCurveError(f"x = {self.x} does not depend on w")
        if self.y == 0:
            raise InvalidCurveError("y vanishes identically")

    # -- members --------------------------------------------------------

    def curve(self) -> SpectralCurve:
        """The whole family as one curve with coefficients in ``Q(t)``."""

        return curve_from_expressions([(self.x, self.y)], name=self.name)

    def fibre(self, t_value: Any, *, allow_bad: bool = False) -> SpectralCurve:
        value = _t_sympy(t_value)
        if not allow_bad and self.bad_set.contains(value):
            reasons = ", ".join(self.bad_set.reasons(value))
            raise FiberInvalidError(f"t = {value} lies in the bad set of {self.name} ({reasons})", t=t_value)
        x = sympy.cancel(self.x.subs(T, value))
        y = sympy.cancel(self.y.subs(T, value))
        return curve_from_expressions([(x, y)], name=f"{self.name}@t={value}")

    def central_curve(self) -> SpectralCurve:
        if self.central_components:
            return curve_from_expressions(list(self.central_components), name=f"{self.name}@t=0")
        return self.fibre(0, allow_bad=True)

    def central_expressions(self) -> list[tuple[sympy.Expr, sympy.Expr | None]]:
        if self.central_components:
            return list(self.central_components)
        return [(sympy.cancel(self.x.subs(T, 0)), sympy.cancel(self.y.subs(T, 0)))]

    def depends_on_t(self) -> bool:
        return T in self.x.free_symbols or T in self.y.free_symbols

    @cached_property
    def homogeneity(self) -> Homogeneity | None:
        """Weights making the family homogeneous, with ``t`` of weight ``+-1``."""

        if not self.depends_on_t():
            return None
        for weight in (1, -1):
            alpha = _scaling_exponent(self.x, weight)
            beta = _scaling_exponent(self.y, weight)
            if alpha is not None and beta is not None:
                return Homogeneity(weight, alpha, beta)
        return None

    @cached_property
    def bad_set(self) -> BadSet:
        with span("families::bad_set", logger_name=LOGGER_NAME, metadata={"family": self.name}):
            return compute_bad_set(self.x, self.y)

    def describe(self) -> dict[str, Any]:
        payload: dict[str, Any] = {
            "name": self.name,
            "case": self.case,
            "x": sympy.sstr(self.x),
            "y": sympy.sstr(self.y),
            "bad_set": self.bad_set.describe(),
        }
        if self.r is not None:
            payload["r"] = self.r
            payload["s"] = self.s
        if self.L is not None:
            payload["L"] = sympy.sstr(self.L)
            payload["R"] = sympy.sstr(self.R)
        if self.homogeneity is not None:
            payload["weights"] = self.homogeneity.describe()
        if self.reparametrization:
            payload["reparametrization"] = self.reparametrization
        payload["central"] = [
            {"x": sympy.sstr(x), "y": "oo" if y is None else sympy.sstr(y)} for x, y in self.central_expressions()
        ]
        return payload


# -- deformations of the (r, s) curves ----------------------------------

V = sympy.Symbol("v")


def _reversed(poly: sympy.Expr, degree: int) -> sympy.Expr:
    """``w^degree * poly(1/w)`` for a polynomial ``poly`` in ``v``."""

    return sympy.expand(W**degree * poly.subs(V, 1 / W))


def _degree(poly: sympy.Expr, symbol: sympy.Symbol) -> int:
    return 0 if poly.is_number else int(sympy.degree(poly, symbol))


def _require_nonzero_ends(L: sympy.Expr, R: sympy.Expr, bound: int, *, relaxed: bool) -> None:
    """Degrees at most ``bound`` and ``L(0) R(0) != 0``, or ``L^(0) R^(0) != 0`` when relaxed."""

    if _degree(L, V) > bound or _degree(R, W) > bound:
        raise DomainError(f"L and R have degree at most {bound}")
    if sympy.expand(L.subs(V, 0) * R.subs(W, 0)) != 0:
        return
    L_check = _reversed(L, bound)
    R_check = sympy.expand(W**bound * R.subs(W, 1 / W))
    if relaxed and sympy.expand(L_check.subs(W, 0) * R_check.subs(W, 0)) != 0:
        return
    raise DomainError("need L(0) R(0) != 0" + (" or L^(0) R^(0) != 0" if relaxed else ""))


def build_rs_family(
    r: int,
    s: int,
    L: Any = None,
    R: Any = None,
    *,
    name: str | None = None,
) -> FamilySpec:
    """Deformation of the ``(r, s)`` curve by the polynomials ``L(v)`` and ``R(w)``.

    ``L = R = 1`` gives the ``(r, s)`` curve itself (``L = R = w^r`` when
    ``s = r + 1``). Defaults are the one-parameter slice ``L = 1 + t v``,
    ``R = 1`` (for ``s = r + 1``: ``L = v^(r-1) (v + t)``, ``R = w^r``).
    """

    if r < 2 or s < 1 or s > r + 1 or s == r or math.gcd(r, s) != 1:
        raise DomainError(f"no deformation family for (r, s) = ({r}, {s})")
    label = name or f"S({r},{s})_t"
    if s == r + 1:
        L = _as_expr(L) if L is not None else V ** (r - 1) * (V + T)
        R = _as_expr(R) if R is not None else W**r
        _require_nonzero_ends(L, R, r, relaxed=True)
        L_check = _reversed(L, r)
        x, y = L_check / R, 1 / W
        return _validated(FamilySpec(x, y, name=label, case="rs+1", r=r, s=s, L=L, R=R))

    data = rs_delta_max(r, s)
    L = _as_expr(L) if L is not None else 1 + T * V
    R = _as_expr(R) if R is not None else sympy.Integer(1)
    r1, s1 = data.r_prime, data.s_prime
    bound = data.b if data.case in ("F+", "F+-") else data.c
    _require_nonzero_ends(L, R, bound, relaxed=s == r - 1)
    L_check = _reversed(L, bound)
    if data.case in ("F+", "F+-"):
        x = W ** (r - bound * r1) * (L_check / R) ** r1
        y = W ** (-(r - s - bound * (r1 - s1))) * (R / L_check) ** (r1 - s1)
    else:
        x = W ** (r - bound * (r - r1)) * (L_check / R) ** (r - r1)
        y = W ** (-(r - s - bound * (r - r1 - (s - s1)))) * (R / L_check) ** (r - r1 - (s - s1))
    return _validated(FamilySpec(x, y, name=label, case=data.case, r=r, s=s, L=L, R=R))


def _validated(family: FamilySpec) -> FamilySpec:
    for x, _ in family.central_expressions():
        if W not in x.free_symbols:
            raise DomainError(f"{family.name}: x is constant on the central fibre")
    record_event(
        "family.built",
        data={"family": family.name, "case": family.case, "x": sympy.sstr(family.x)},
        logger_name=LOGGER_NAME,
    )
    return family


def generic_rs_family(r: int, s: int) -> FamilySpec:
    """Full-degree deformation with distinct roots, for splitting profiles."""

    if s == r + 1:
        L = sympy.Mul(*(V - p * T for p in _L_ROOTS[:r]))
        R = sympy.Mul(*(W - q * T for q in _R_ROOTS[:r]))
        return build_rs_family(r, s, L, R, name=f"S({r},{s})_generic")
    data = rs_delta_max(r, s) if s <= r - 1 else None
    if data is None:
        raise DomainError(f"no deformation family for (r, s) = ({r}, {s})")
    bound = data.b if data.case in ("F+", "F+-") else data.c
    L = sympy.Mul(*(1 - p * T * V for p in _L_ROOTS[:bound]))
    R = sympy.Mul(*(1 - q * T * W for q in _R_ROOTS[:bound]))
    return build_rs_family(r, s, L, R, name=f"S({r},{s})_generic")


# -- named families -----------------------------------------------------


def chebyshev_family(r: int, *, square: bool = True) -> FamilySpec:
    """``x = 2 t^r T_r(w / 2t)``, ``y = w``: Chebyshev polynomials of the first kind.

    With ``square=False`` the parameter is ``t`` in ``x = 2 t^(r/2) T_r(w / 2 sqrt t)``,
    which stays polynomial in ``t``.
    """

    if r < 2:
        raise DomainError(f"Chebyshev families need r >= 2, got {r}")
    x = sympy.expand(2 * T**r * sympy.chebyshevt(r, W / (2 * T)))
    if not square:
        x = sympy.expand(x.subs(T, sympy.sqrt(T)))
    return _validated(
        FamilySpec(
            x,
            W,
            name=f"chebyshev({r})" if square else f"chebyshev({r}, sqrt t)",
            case="chebyshev",
            r=r,
            s=r + 1,
        )
    )


def singular_family() -> FamilySpec:
    """``x = w^3 - 3 t^2 w``, ``y = 1/w^2``: a deformation of the (3,1) curve with ``y`` singular."""

    return _validated(FamilySpec(W**3 - 3 * T**2 * W, W**-2, name="singular(3,1)", case="singular", r=3, s=1))


def seven_five_family() -> FamilySpec:
    """``x = w (w^2 - t^2)^3``, ``y = 1/(w^2 - t^2)``, the slice ``x^2 y^7 - t^2 y - 1 = 0``."""

    return build_rs_family(7, 5, 1 - T**2 * V**2, 1, name="S(7,5)_t")


def norbury_family(k: int) -> FamilySpec:
    """``x = w^2 + u w^(2-k)``, ``y = 1/w`` reparametrized by ``u = 2 t^k / (k - 2)``.

    The ramification points sit at ``w = t zeta_k^j``. At ``t = 0`` the
    spectral curve acquires the horizontal component ``{Y^(k-2) = 0}``, which
    is dropped, leaving the Bessel curve ``x = w^2, y = 1/w``.
    """

    if k < 3:
        raise DomainError(f"Norbury families need k >= 3, got {k}")
    coefficient = sympy.Rational(2, k - 2)
    return _validated(
        FamilySpec(
            W**2 + coefficient * T**k * W ** (2 - k),
            1 / W,
            name=f"norbury({k})",
            case="norbury",
            r=2,
            s=1,
            reparametrization=f"u = {coefficient} t^{k}",
            central_components=((W**2, 1 / W), (W, None)),
        )
    )


def custom_family(x: Any, y: Any, *, name: str = "custom") -> FamilySpec:
    return _validated(FamilySpec(_as_expr(x), _as_expr(y), name=name, case="custom"))


# -- JSON family specs --------------------------------------------------


def _load(document: str | Mapping[str, Any], source: str) -> Mapping[str, Any]:
    if isinstance(document, Mapping):
        return document
    try:
        loaded = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, source=source, line=exc.lineno, column=exc.colno) from exc
    if not isinstance(loaded, Mapping):
        raise ParseError("a family spec is a JSON object", source=source)
    return loaded


def _integer(spec: Mapping[str, Any], key: str, source: str) -> int:
    value = spec.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{key!r} must be an integer, got {value!r}", source=source)
    return value


def _polynomial(spec: Mapping[str, Any], key: str, names: Sequence[str], source: str) -> sympy.Expr | None:
    if key not in spec:
        return None
    raw = spec[key]
    if isinstance(raw, (int, float)) and not isinstance(raw, bool):
        raw = str(raw)
    if not isinstance(raw, str):
        raise ParseError(f"{key!r} must be a string", source=source)
    return parse_expression(raw, names, source=f"{source}:{key}")


def family_from_spec(document: str | Mapping[str, Any], *, source: str = "<family spec>") -> FamilySpec:
    """Read ``{"family": "rs" | "custom" | "chebyshev" | "singular" | "norbury" | "seven-five", ...}``."""

    spec = _load(document, source)
    kind = spec.get("family")
    name = spec.get("name")
    if kind == "rs":
        r, s = _integer(spec, "r", source), _integer(spec, "s", source)
        L = _polynomial(spec, "L", ["v", "t"], source)
        R = _polynomial(spec, "R", ["w", "t"], source)
        return build_rs_family(r, s, L, R, name=name)
    if kind == "custom":
        x = _polynomial(spec, "x", ["w", "t"], source)
        y = _polynomial(spec, "y", ["w", "t"], source)
        if x is None or y is None:
            raise ParseError("a custom family needs 'x' and 'y'", source=source)
        return custom_family(x, y, name=name or "custom")
    if kind == "chebyshev":
        return chebyshev_family(_integer(spec, "r", source), square=bool(spec.get("square", True)))
    if kind == "singular":
        return singular_family()
    if kind == "norbury":
        return norbury_family(_integer(spec, "k", source))
    if kind == "seven-five":
        return seven_five_family()
    raise ParseError(f"unknown family kind {kind!r}", source=source)


__all__ = [
    "BadSet",
    "CASES",
    "FamilySpec",
    "Homogeneity",
    "V",
    "build_rs_family",
    "chebyshev_family",
    "compute_bad_set",
    "custom_family",
    "family_from_spec",
    "generic_rs_family",
    "norbury_family",
    "seven_five_family",
    "singular_family",
]
