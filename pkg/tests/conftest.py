"""Collects acceptance results and prints one line per criterion at the end of the run."""

from collections import defaultdict

import pytest

_outcomes = defaultdict(list)
_titles = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion the test belongs to")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    _titles[number] = title
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        if hasattr(rep, "wasxfail"):
            state = "xfail"
        elif rep.passed:
            state = "pass"
        else:
            state = "fail"
        _outcomes[number].append((item.name, state))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(_outcomes):
        states = [s for _, s in _outcomes[number]]
        if "fail" in states:
            verdict = "FAIL"
        elif "xfail" in states:
            verdict = "XFAIL"
        else:
            verdict = "PASS"
        extra = ""
        xf = [n for n, s in _outcomes[number] if s == "xfail"]
        if xf and verdict == "XFAIL":
            extra = f"  (other checks pass; strict xfail: {', '.join(xf)})"
        tr.write_line(f"criterion {number:2d} {verdict:5s} {_titles[number]}{extra}")
