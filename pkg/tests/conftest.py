import sys
from pathlib import Path

import pytest

from hottloop import stdlib

sys.path.insert(0, str(Path(__file__).parent))

NEGATIVE_DIR = Path(__file__).parent / "negative"


@pytest.fixture(scope="session")
def std_env():
    """The checked standard library; tests must not mutate it."""
    return stdlib.environment()


_RESULTS: dict[int, tuple[str, bool, str]] = {}


def record(n: int, label: str, passed: bool, detail: str = "") -> None:
    """Remember the outcome of acceptance criterion ``n`` for the run summary."""
    _RESULTS[n] = (label, passed, detail)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        label, passed, detail = _RESULTS[n]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{n}] {status} {label}" + (f": {detail}" if detail else ""))
