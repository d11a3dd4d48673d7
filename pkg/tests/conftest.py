"""Shared fixtures and the acceptance summary section."""

import pytest

_acceptance_lines: list[str] = []


@pytest.fixture
def acceptance():
    """Recorder for one acceptance line, echoed at session end."""

    def record(line: str) -> None:
        _acceptance_lines.append(line)

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines):
            terminalreporter.write_line(line)
