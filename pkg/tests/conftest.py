from pathlib import Path

import pytest

from gcapacity.io import load_document

DATA = Path(__file__).resolve().parents[1] / "src" / "gcapacity" / "data"

# filled by test_acceptance, echoed once at the end of the run
ACCEPTANCE_LINES = {}


@pytest.fixture
def data_dir():
    return DATA


def load(name):
    return load_document(DATA / f"{name}.yaml")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
