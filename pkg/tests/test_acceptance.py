"""One test per acceptance criterion, each printing a PASS/FAIL line.

Run ``python3 tests/test_acceptance.py`` for the lines alone.  Under pytest
the lines are repeated in an "acceptance criteria" section of the summary.
"""

import pytest

from qcext import verify as V

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from another directory
    ACCEPTANCE_LINES = []

NUMBERED = list(enumerate(V.CRITERIA, start=1))


@pytest.mark.parametrize("number,check", NUMBERED, ids=[f"criterion_{i:02d}_{c.__name__[6:]}" for i, c in NUMBERED])
def test_criterion(number, check):
    result = check()
    line = f"criterion {number:2d} {result.line()}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert result.passed, line


if __name__ == "__main__":
    for i, check in NUMBERED:
        print(f"criterion {i:2d} {check().line()}", flush=True)
