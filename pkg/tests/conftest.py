from __future__ import annotations

import pytest


def pytest_configure(config):
    config._criteria_lines = []


@pytest.fixture
def report_criterion(request):
    """Print a one-line PASS/FAIL verdict and keep it for the session summary."""

    def report(line: str) -> None:
        print(line)
        request.config._criteria_lines.append(line)

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_criteria_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
