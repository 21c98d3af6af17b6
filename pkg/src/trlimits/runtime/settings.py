"""Engine settings read from ``TRLIMITS_*`` environment variables."""

from __future__ import annotations

import os
from dataclasses import dataclass

from .telemetry import ENV_PREFIX


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(f"{ENV_PREFIX}{name}")
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{ENV_PREFIX}{name} must be an integer, got {raw!r}") from exc


def _env_flag(name: str, default: bool) -> bool:
    raw = os.getenv(f"{ENV_PREFIX}{name}")
    if raw is None:
        return default
    return raw.lower() in {"1", "true", "yes", "on"}


@dataclass(frozen=True, slots=True)
class EngineSettings:
    """Knobs shared by the exact and numeric recursion backends.

    ``series_order`` is the initial relative precision of chart series,
    ``widen_step`` the increment applied after an insufficient-precision signal
    and ``max_widenings`` the number of retries before giving up.
    """

    series_order: int = 8
    widen_step: int = 4
    max_widenings: int = 6
    confirm_precision: bool = False
    digits: int = 30
    quadrature_nodes: int = 64

    def __post_init__(self) -> None:
        if self.series_order < 1:
            raise ValueError("series_order must be positive")
        if self.widen_step < 1:
            raise ValueError("widen_step must be positive")
        if self.max_widenings < 0:
            raise ValueError("max_widenings must be non-negative")
        if self.digits < 10:
            raise ValueError("digits must be at least 10")
        if self.quadrature_nodes < 8:
            raise ValueError("quadrature_nodes must be at least 8")

    @classmethod
    def from_env(cls) -> "EngineSettings":
        return cls(
            series_order=_env_int("SERIES_ORDER", 8),
            widen_step=_env_int("WIDEN_STEP", 4),
            max_widenings=_env_int("MAX_WIDENINGS", 6),
            confirm_precision=_env_flag("CONFIRM_PRECISION", False),
            digits=_env_int("PRECISION", 30),
            quadrature_nodes=_env_int("QUADRATURE", 64),
        )


__all__ = ["EngineSettings"]
