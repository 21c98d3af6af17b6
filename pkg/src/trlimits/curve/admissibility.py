"""Local admissibility of ramification points.

A point with ``r = 1`` is always admissible. Otherwise three clauses must hold:

``lA1``  gcd(s, r) = 1
``lA2``  s <= -1, or 1 <= s <= r + 1 with r = +-1 mod s
``lA3``  s_bar is s or s - 1
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from trlimits.errors import DomainError, NonAdmissibleError

from .local import RamPoint


@dataclass(frozen=True, slots=True)
class LocalVerdict:
    admissible: bool
    clause: str | None
    reason: str

    def __bool__(self) -> bool:
        return self.admissible


def admissibility_of_type(r: int, s: int | float, s_bar: int | None = None) -> LocalVerdict:
    """Verdict for local data ``(r, s, s_bar)``; ``s_bar`` defaults to ``s``."""

    if r < 1:
        raise DomainError("ramification order must be positive")
    if r == 1:
        return LocalVerdict(True, None, "unramified")
    if s == math.inf:
        return LocalVerdict(False, "lA1", "s is infinite: y dx is locally a pullback by x")
    s = int(s)
    if math.gcd(s, r) != 1:
        return LocalVerdict(False, "lA1", f"gcd(s, r) = gcd({s}, {r}) != 1")
    if s >= 1:
        if s > r + 1:
            return LocalVerdict(False, "lA2", f"s = {s} exceeds r + 1 = {r + 1}")
        if r % s not in (1 % s, (s - 1) % s):
            return LocalVerdict(False, "lA2", f"r = {r} is not +-1 modulo s = {s}")
    elif s == 0:
        return LocalVerdict(False, "lA1", "s = 0 is divisible by r")
    if s_bar is not None and s_bar not in (s, s - 1):
        return LocalVerdict(False, "lA3", f"s_bar = {s_bar} is neither s nor s - 1")
    return LocalVerdict(True, None, f"type ({r}, {s}) is admissible")


def is_locally_admissible(point: RamPoint) -> LocalVerdict:
    if not point.filled:
        raise DomainError("local parameters must be filled before checking admissibility")
    return admissibility_of_type(point.r, point.s or 0, point.s_bar)


def local_admissibility_report(points: Iterable[RamPoint]) -> list[tuple[RamPoint, LocalVerdict]]:
    return [(p, is_locally_admissible(p)) for p in points]


def require_locally_admissible(points: Iterable[RamPoint]) -> None:
    """Raise on the first contributing point that fails a clause."""

    for point in points:
        if point.contributes is False:
            continue
        verdict = is_locally_admissible(point)
        if not verdict:
            raise NonAdmissibleError(
                f"point {point.location!r} is not locally admissible: {verdict.reason}",
                point=point,
                clause=verdict.clause,
            )


__all__ = [
    "LocalVerdict",
    "admissibility_of_type",
    "is_locally_admissible",
    "local_admissibility_report",
    "require_locally_admissible",
]
