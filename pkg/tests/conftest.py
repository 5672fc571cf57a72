from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("qsl3", deadline=None, max_examples=40)
settings.load_profile("qsl3")

# Rational values of t with t != 0 and t^3 != 1.
SAMPLE_TS = [Fraction(n, d) for n, d in [
    (2, 1), (3, 1), (-1, 1), (-2, 1), (1, 2), (-1, 2), (7, 3), (-5, 3), (3, 4), (4, 5),
    (5, 2), (-3, 7), (11, 6), (2, 9), (-9, 4), (13, 5), (6, 1), (-7, 2), (1, 3), (17, 11),
    (-4, 3), (8, 7),
]]


@pytest.fixture
def sample_ts():
    return list(SAMPLE_TS)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running verification")
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")


_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call":
        return
    n, title = mark.args
    entry = _CRITERIA.setdefault(n, {"title": title, "ok": True, "seconds": 0.0})
    entry["ok"] = entry["ok"] and report.passed
    entry["seconds"] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        verdict = "PASS" if e["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {verdict}  {e['title']}  ({e['seconds']:.1f} s)")
