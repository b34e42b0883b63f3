from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "repo"))

_CRITERIA: dict[str, str] = {}


@pytest.fixture
def record_criterion():
    """Store the one-line verdict of an acceptance criterion."""
    def rec(key: str, ok: bool, details: str) -> None:
        line = f"CRITERION {key} {'PASS' if ok else 'FAIL'} {details}"
        _CRITERIA[key] = line
        print(line)
    return rec


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_CRITERIA, key=lambda k: (int(k.split(".")[0]), k)):
        terminalreporter.write_line(_CRITERIA[key])
