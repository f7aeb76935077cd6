import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

_RESULTS: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def data():
    return HERE / "data"


@pytest.fixture
def criterion():
    """Record a pass/fail line for one acceptance criterion."""

    def report(n: int, ok: bool, detail: str) -> bool:
        _RESULTS[n] = (ok, detail)
        print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        ok, detail = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})")
