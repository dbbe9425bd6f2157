import pytest

CRITERIA: list[str] = []


@pytest.fixture
def report():
    """Record a criterion outcome line; printed again in the terminal summary."""

    def _report(number, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        print(line)
        CRITERIA.append(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in CRITERIA:
            terminalreporter.write_line(line)
