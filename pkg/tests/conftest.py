import os
import sys

from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("default")

import pytest

ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def acceptance(request):
    """Record one criterion's verdict for the end-of-run summary."""
    store = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def record(number, title, passed, detail=""):
        store[number] = (title, bool(passed), detail)
        print(_line(number, title, passed, detail))
        return passed

    return record


def _line(number, title, passed, detail):
    verdict = "PASS" if passed else "FAIL"
    return f"[{verdict}] criterion {number:>2}: {title}" + (f" ({detail})" if detail else "")


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(ACCEPTANCE_KEY, {})
    if not store:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(store):
        terminalreporter.write_line(_line(number, *store[number]))
