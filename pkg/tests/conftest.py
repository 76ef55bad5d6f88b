import pytest

_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance verdict line and assert it."""

    def report(label: str, ok: bool, detail: str = "") -> None:
        _LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  [{detail}]" if detail else ""))
        assert ok, f"{label}: {detail}"

    return report


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
