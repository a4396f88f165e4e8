from pathlib import Path

import pytest

from fp2.parser import parse_program

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

_criteria: dict = {}


def load(name: str):
    return parse_program((DATA / name).read_text())


@pytest.fixture
def data():
    return DATA


def pytest_runtest_logreport(report):
    if report.when != "call" and not (report.when == "setup" and report.outcome != "passed"):
        return
    marker = "test_acceptance.py::test_criterion_"
    if marker not in report.nodeid:
        return
    name = report.nodeid.split(marker, 1)[1]
    number, _, label = name.partition("_")
    _criteria[int(number)] = (label.replace("_", " "), report.outcome, getattr(report, "wasxfail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        label, outcome, why = _criteria[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        if why:
            verdict += f" (known conflict: {why})"
        terminalreporter.write_line(f"criterion {number} ({label}): {verdict}")
