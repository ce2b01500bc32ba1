import pytest

_LINES = []


@pytest.fixture
def criterion():
    """Record one pass/fail line for the terminal summary."""
    def record(number, passed, text):
        _LINES.append(f"{'PASS' if passed else 'FAIL'}  criterion {number:>2}: {text}")
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
