"""Runtime services: telelog telemetry and environment-driven engine settings."""

from .settings import EngineSettings
from .telemetry import SpanHandle, configure, get_logger, record_event, span

__all__ = [
    "EngineSettings",
    "SpanHandle",
    "configure",
    "get_logger",
    "record_event",
    "span",
]
