"""Terminal summary for the acceptance suite: one PASS/FAIL line per
criterion, printed after the run regardless of capture settings."""

from __future__ import annotations

import re

_CRITERION_RE = re.compile(r"test_acceptance\.py::test_criterion_(\d+)")
_DESCRIPTIONS: dict[int, str] = {}
_OUTCOMES: dict[int, str] = {}


def register_criterion(number: int, description: str) -> None:
    _DESCRIPTIONS[number] = description


def pytest_runtest_logreport(report):
    match = _CRITERION_RE.search(report.nodeid)
    if not match:
        return
    number = int(match.group(1))
    if report.when == "call":
        _OUTCOMES[number] = "PASS" if report.passed else "FAIL"
    elif report.when == "setup" and report.failed:
        _OUTCOMES[number] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_OUTCOMES):
        desc = _DESCRIPTIONS.get(number, "")
        terminalreporter.write_line(
            f"ACCEPTANCE {number:2d}: {_OUTCOMES[number]} {desc}"
        )
