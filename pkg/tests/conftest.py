import json
from pathlib import Path

import pytest

from hopfcc.model import reference_params

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def params():
    return reference_params()


@pytest.fixture(scope="session")
def frozen():
    """High-precision constants from scripts/reference_constants.py."""
    raw = json.loads((DATA / "reference_constants.json").read_text())

    def unpack(v):
        return complex(*v) if isinstance(v, list) else v

    ref = {h: {k: unpack(v) for k, v in d.items()} for h, d in raw["reference"].items()}
    return {"reference": ref, "extra": raw["extra"]}


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
