import pytest

_ACCEPTANCE: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record one acceptance line; use as ``criterion(name, passed, detail)``."""

    def record(name: str, passed: bool, detail: str = "") -> bool:
        _ACCEPTANCE.append((name, bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        line = f"{'PASS' if passed else 'FAIL'}  {name}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
