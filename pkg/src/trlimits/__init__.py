"""Exact topological recursion on genus-0 spectral curves and its limits."""

__all__ = [
    "algebra",
    "series",
    "curve",
    "recursion",
    "globalization",
    "polygon",
    "families",
    "cli",
    "runtime",
    "errors",
]

__version__ = "0.1.0"
