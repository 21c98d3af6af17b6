"""Truncated Laurent series and rational functions of one variable."""

from __future__ import annotations

from typing import Any

from trlimits.runtime.settings import EngineSettings

from .laurent import LaurentSeries
from .rational_function import RationalFunction1V, W, expand_at, taylor_shift


def _terms(series: LaurentSeries, terms: int | None) -> int | None:
    # exact series have no window of their own
    if terms is None and series.exact:
        return EngineSettings.from_env().series_order
    return terms


def series_rth_root(series: LaurentSeries, r: int, *, root: Any = None, terms: int | None = None) -> LaurentSeries:
    """Principal ``r``-th root; exact input is expanded to ``terms`` (``TRLIMITS_SERIES_ORDER`` by default)."""

    return series.rth_root(r, root=root, terms=_terms(series, terms))


def series_reverse(series: LaurentSeries, *, terms: int | None = None) -> LaurentSeries:
    return series.reverse(terms=_terms(series, terms))


def residue(series: LaurentSeries) -> Any:
    return series.residue()


__all__ = [
    "LaurentSeries",
    "RationalFunction1V",
    "W",
    "expand_at",
    "residue",
    "series_reverse",
    "series_rth_root",
    "taylor_shift",
]
