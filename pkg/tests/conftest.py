import os
from pathlib import Path

import pytest

# Generators are expensive (~15 s at bound 16); keep them between runs.
os.environ.setdefault("SIEGELMODP_CACHE", str(Path(__file__).resolve().parent.parent / ".gen_cache"))

from siegelmodp.genforms import default_cache  # noqa: E402


@pytest.fixture(scope="session")
def gc():
    cache = default_cache(16)
    for name in ("E4", "E6", "E10", "E12", "X10", "X12", "X35"):
        cache[name]
    return cache


# one line per acceptance criterion, printed after the run
ACCEPTANCE: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, text = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {text}")
