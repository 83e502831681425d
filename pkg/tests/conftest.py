"""Shared fixtures: pre-scored committed embeddings and the acceptance
criterion summary printed at the end of a run."""

from __future__ import annotations

import pytest

from embias.server import ServerConfig, ServerState, StateHolder, build_state

from fixture_gen import PLANTED_FIXTURE, SERVICE_FIXTURE


@pytest.fixture(scope="session")
def service_state() -> ServerState:
    if not SERVICE_FIXTURE.exists():
        pytest.fail("run `python3 tests/fixture_gen.py` to create tests/data fixtures")
    return build_state(ServerConfig(embedding_path=str(SERVICE_FIXTURE)))


@pytest.fixture(scope="session")
def planted_state() -> ServerState:
    if not PLANTED_FIXTURE.exists():
        pytest.fail("run `python3 tests/fixture_gen.py` to create tests/data fixtures")
    return build_state(ServerConfig(embedding_path=str(PLANTED_FIXTURE)))


@pytest.fixture()
def holder(service_state) -> StateHolder:
    # fresh holder per test: mutations swap states without cross-test leaks
    return StateHolder(service_state)


@pytest.fixture()
def client(holder):
    from fastapi.testclient import TestClient

    from embias.server import create_app

    return TestClient(create_app(holder))


# ---------------------------------------------------------------------------
# Acceptance criterion reporting: one pass/fail line per criterion.

_criteria: dict[str, str] = {}
_outcomes: dict[str, str] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker:
            _criteria[item.nodeid] = marker.args[0]


def pytest_runtest_logreport(report):
    if report.nodeid in _criteria and report.when == "call":
        _outcomes[report.nodeid] = "PASS" if report.passed else "FAIL"


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(name): acceptance criterion implemented by this test"
    )
    config.addinivalue_line(
        "markers", "integration: needs the real pretrained embedding (non-gating)"
    )


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for nodeid, label in _criteria.items():
        outcome = _outcomes.get(nodeid)
        if outcome:
            terminalreporter.write_line(f"[{outcome}] {label}")
