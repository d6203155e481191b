import json
import math
import sys
from pathlib import Path

import pytest

from twpasim.circuit import default_line, default_resonator

HERE = Path(__file__).parent

F_P = 5.97e9
OMEGA_P = 2 * math.pi * F_P
OMEGA_S = 2 * math.pi * 5.0e9


@pytest.fixture(scope="session")
def oracle():
    with open(HERE / "oracle_values.json") as fh:
        return json.load(fh)


@pytest.fixture(scope="session")
def line():
    return default_line()


@pytest.fixture(scope="session")
def res():
    return default_resonator()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    verdicts = getattr(mod, "VERDICTS", None)
    if not verdicts:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(verdicts):
        terminalreporter.write_line(verdicts[n])
