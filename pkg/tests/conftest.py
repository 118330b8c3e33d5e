import pytest

_LINES_KEY = pytest.StashKey[dict]()


@pytest.fixture
def criterion(request):
    """Record a PASS/FAIL line for an acceptance criterion; printed in the terminal summary."""
    lines = request.config.stash.setdefault(_LINES_KEY, {})

    def record(number: int, ok: bool, detail: str):
        lines[number] = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}"
        print(lines[number])
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(_LINES_KEY, {})
    if lines:
        terminalreporter.section("acceptance criteria")
        for number in sorted(lines):
            terminalreporter.write_line(lines[number])
