from contextlib import contextmanager

import pytest

from trlimits.errors import InsufficientPrecisionError, NonAdmissibleError
from trlimits.runtime import telemetry
from trlimits.runtime.settings import EngineSettings


class RecordingLogger:
    def __init__(self) -> None:
        self.lines: list[tuple[str, str, dict]] = []
        self.context: dict[str, str] = {}
        self.profiled: list[str] = []

    def add_context(self, key: str, value: str) -> None:
        self.context[key] = value

    def remove_context(self, key: str) -> None:
        self.context.pop(key, None)

    @contextmanager
    def profile(self, name: str):
        self.profiled.append(name)
        yield

    def _record(self, level: str):
        def method(message: str, pairs) -> None:
            self.lines.append((level, message, dict(pairs)))

        return method

    def __getattr__(self, name: str):
        if name.endswith("_with"):
            return self._record(name[: -len("_with")])
        raise AttributeError(name)


def make_logger(monkeypatch) -> RecordingLogger:
    log = RecordingLogger()
    monkeypatch.setattr(telemetry, "get_logger", lambda name=None: log)
    return log


def test_span_pushes_metadata_only_for_the_block(monkeypatch) -> None:
    log = make_logger(monkeypatch)

    with telemetry.span("recursion::step", metadata={"g": 1, "n": 1}) as handle:
        assert log.context == {"g": "1", "n": "1"}
        handle.add_metadata("terms", 12)

    assert log.context == {}
    assert log.profiled == ["recursion::step"]
    assert handle.outcome == "ok"
    assert log.lines == []


def test_precision_shortfall_is_logged_as_a_widening(monkeypatch) -> None:
    log = make_logger(monkeypatch)

    with pytest.raises(InsufficientPrecisionError):
        with telemetry.span("series::reverse") as handle:
            raise InsufficientPrecisionError("window", needed=9, known=7, source="kernel")

    assert handle.outcome == "widen"
    ((level, message, payload),) = log.lines
    assert (level, message) == ("debug", "span::widen")
    assert (payload["needed"], payload["known"], payload["source"]) == ("9", "7", "kernel")


def test_domain_refusal_is_a_warning(monkeypatch) -> None:
    log = make_logger(monkeypatch)

    with pytest.raises(NonAdmissibleError):
        with telemetry.span("recursion::step"):
            raise NonAdmissibleError("(7,5)", clause="lA2")

    ((level, message, payload),) = log.lines
    assert (level, message) == ("warning", "span::refused")
    assert payload["error"] == "NonAdmissibleError"
    assert payload["clause"] == "lA2"


def test_explicit_failure_is_not_logged_twice(monkeypatch) -> None:
    log = make_logger(monkeypatch)

    with pytest.raises(InsufficientPrecisionError):
        with telemetry.span("recursion::step") as handle:
            handle.fail("window never closed")
            raise InsufficientPrecisionError("window", needed=3, known=1)

    assert [message for _, message, _ in log.lines] == ["span::fail"]
    assert handle.outcome == "failed"


def test_unexpected_errors_fail_the_span(monkeypatch) -> None:
    log = make_logger(monkeypatch)

    with pytest.raises(ZeroDivisionError):
        with telemetry.span("checks::comb_identity"):
            raise ZeroDivisionError("pole")

    assert log.lines[0][:2] == ("error", "span::fail")


def test_settings_read_the_environment(monkeypatch) -> None:
    monkeypatch.setenv("TRLIMITS_SERIES_ORDER", "11")
    monkeypatch.setenv("TRLIMITS_PRECISION", "40")

    settings = EngineSettings.from_env()

    assert settings.series_order == 11
    assert settings.digits == 40
