from __future__ import annotations

import pytest

from transsasakian.cli import fixture_path
from transsasakian.manifest import load_manifest
from transsasakian.runner import Session

FIXTURES = ("example", "s3", "flat")
TYPES = {"example": (0, -2), "s3": (1, 0), "flat": (0, 0)}

# filled in by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def session(name: str) -> Session:
    return Session(load_manifest(fixture_path(f"{name}.tsm")))


_SESSIONS: dict[str, Session] = {}


def cached_session(name: str) -> Session:
    if name not in _SESSIONS:
        _SESSIONS[name] = session(name)
    return _SESSIONS[name]


@pytest.fixture(params=FIXTURES)
def fixture_session(request) -> Session:
    return cached_session(request.param)


@pytest.fixture
def example() -> Session:
    return cached_session("example")


@pytest.fixture
def s3() -> Session:
    return cached_session("s3")


@pytest.fixture
def flat() -> Session:
    return cached_session("flat")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {n}: {title}")
