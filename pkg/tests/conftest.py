import numpy as np
import pytest

_CRITERIA = {}


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, text = marker.args
    ok = call.excinfo is None
    prev = _CRITERIA.get(number, (text, True))
    _CRITERIA[number] = (text, prev[1] and ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        text, ok = _CRITERIA[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
