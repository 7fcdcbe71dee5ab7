from __future__ import annotations

import pytest

from congestlab.game import CongestionGame

_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[number] = (title, "PASS" if report.passed else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, verdict = _CRITERIA[number]
        terminalreporter.write_line(f"{verdict}  criterion {number}: {title}")


@pytest.fixture
def g1() -> CongestionGame:
    """Symmetric negative game: z0={a}, z1={b}, z2={a,b}."""
    return CongestionGame.symmetric(
        2, {"a": ["-4", "-2"], "b": ["-6", "-3"]}, [["a"], ["b"], ["a", "b"]]
    )


@pytest.fixture
def g2() -> CongestionGame:
    """Asymmetric positive game: S_0={{a}}, S_1={{a},{b}}."""
    return CongestionGame.per_player({"a": [1, 3], "b": [2, 5]}, [[["a"]], [["a"], ["b"]]])


@pytest.fixture
def g2_sym() -> CongestionGame:
    return CongestionGame.symmetric(2, {"a": [1, 3], "b": [2, 5]}, [["a"], ["b"]])
