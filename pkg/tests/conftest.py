from __future__ import annotations

import random
from collections import defaultdict

import pytest

_criteria: dict[int, list[tuple[str, str, float]]] = defaultdict(list)
_titles: dict[int, str] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    _titles[number] = title
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        status = "PASS" if report.passed else "FAIL"
        _criteria[number].append((item.name, status, report.duration))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        runs = _criteria[number]
        status = "PASS" if all(s == "PASS" for _, s, _ in runs) else "FAIL"
        total = sum(d for _, _, d in runs)
        terminalreporter.write_line(f"criterion {number}: {status}  {_titles[number]}  ({total:.1f}s)")
        for name, s, d in runs:
            terminalreporter.write_line(f"    {s}  {name}  ({d:.2f}s)")


@pytest.fixture
def rng() -> random.Random:
    return random.Random(20241016)
