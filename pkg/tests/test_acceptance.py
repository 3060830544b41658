"""Every acceptance criterion at its stated tolerance.

Each test prints one ``[PASS]``/``[FAIL]`` line; the lines are also repeated
in the pytest terminal summary.  ``python3 tests/test_acceptance.py`` runs
the criteria without pytest.
"""
import sys

import pytest

from thermoshift.acceptance import CRITERIA

LINES: dict[int, str] = {}


@pytest.mark.parametrize("number", sorted(CRITERIA))
def test_criterion(number):
    result = CRITERIA[number]()
    LINES[number] = result.line()
    print(result.line())
    assert result.passed, result.line()


if __name__ == "__main__":
    ok = True
    for number in sorted(CRITERIA):
        result = CRITERIA[number]()
        print(result.line(), flush=True)
        ok &= result.passed
    sys.exit(0 if ok else 1)
