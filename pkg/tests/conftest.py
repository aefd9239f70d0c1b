import os
import sys

import pytest
from mpmath import mp


@pytest.fixture(autouse=True)
def _clean_precision(monkeypatch):
    # every routine sets its own working precision; make sure nothing leaks in
    monkeypatch.delenv("ZETADR_DIGITS", raising=False)
    saved = mp.dps
    mp.dps = 15
    yield
    mp.dps = saved


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, _, line in module.RESULTS:
        terminalreporter.write_line(line)
