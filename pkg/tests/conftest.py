import pytest

ACCEPTANCE_LINES: list = []


@pytest.fixture
def report():
    """Record one summary line per acceptance criterion."""

    def add(line: str):
        ACCEPTANCE_LINES.append(line)
        print(line)

    return add


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
