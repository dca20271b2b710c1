import pytest

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    """Record one acceptance criterion outcome for the end-of-run summary."""
    def record(label: str, passed: bool, detail: str = ""):
        _ACCEPTANCE[label] = (bool(passed), detail)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0])):
        ok, detail = _ACCEPTANCE[label]
        tr.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")
