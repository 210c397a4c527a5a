import pytest

_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record ``(name, ok, detail)`` for the acceptance summary."""

    def record(name, ok, detail=""):
        _CRITERIA.setdefault(name, []).append((bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance")
    for name in sorted(_CRITERIA, key=lambda n: int(n[1:])):
        parts = _CRITERIA[name]
        status = "PASS" if all(ok for ok, _ in parts) else "FAIL"
        detail = "; ".join(d for _, d in parts if d)
        terminalreporter.write_line(f"{name} {status}  {detail}")
