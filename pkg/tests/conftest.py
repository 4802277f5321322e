import pathlib

import pytest

REPORT_DIR = pathlib.Path(__file__).parent / "reports"


@pytest.fixture(scope="session")
def acceptance_log():
    """Collects one PASS/FAIL line per acceptance criterion and writes
    them to tests/reports/acceptance.txt at the end of the session."""
    lines: list[str] = []
    yield lines
    if lines:
        REPORT_DIR.mkdir(exist_ok=True)
        path = REPORT_DIR / "acceptance.txt"
        path.write_text("\n".join(lines) + "\n")
