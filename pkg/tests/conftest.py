"""Per-criterion PASS/FAIL summary for the acceptance module."""

import pytest

CRITERIA = {
    1: "bracket table: 21 relations exact",
    2: "first-order extension pinned values and fields",
    3: "order-1 system entails the hand equations",
    4: "second-order obstruction on [E1,E2] d/dv",
    5: "torus lifts commute and restrict to E5, E6",
    6: "property suites on random inputs",
    7: "CLI determinism and round-trip fixed points",
}

_outcomes: dict[int, list[bool]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        _outcomes.setdefault(marker.args[0], []).append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        if results is None:
            status = "NOT RUN"
        else:
            status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {n} [{title}]: {status}")
