from __future__ import annotations

import contextlib
import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=100,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_ACCEPTANCE: dict[int, tuple[bool, str, float]] = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line per acceptance criterion for the summary."""

    @contextlib.contextmanager
    def record(number: int, label: str):
        t0 = time.perf_counter()
        try:
            yield
        except BaseException:
            _ACCEPTANCE[number] = (False, label, time.perf_counter() - t0)
            raise
        _ACCEPTANCE[number] = (True, label, time.perf_counter() - t0)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        ok, label, secs = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {label}  ({secs:.1f} s)")
