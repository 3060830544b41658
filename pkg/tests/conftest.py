import sys

import pytest
from hypothesis import HealthCheck, settings

from thermoshift import BetaShift

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

GOLDEN = "poly:-1,-1,1@[1,2]"
FIVE_HALVES = "rational:5/2"


@pytest.fixture(scope="session")
def golden():
    return BetaShift(GOLDEN)


@pytest.fixture(scope="session")
def five_halves():
    return BetaShift(FIVE_HALVES)


@pytest.fixture(scope="session", params=[GOLDEN, FIVE_HALVES], ids=["golden", "5/2"])
def shift(request):
    return BetaShift(request.param)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "LINES", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(lines):
        terminalreporter.write_line(lines[number])
