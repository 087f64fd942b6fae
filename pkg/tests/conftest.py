import re

import pytest

ACCEPTANCE_NOTES = {}
_OUTCOMES = {}


@pytest.fixture
def note(request):
    """Attach a one-line measurement to the acceptance summary."""
    m = re.match(r"test_criterion_(\d+)", request.node.name)
    key = int(m.group(1)) if m else request.node.name

    def record(text):
        ACCEPTANCE_NOTES[key] = text
        print(f"[criterion {key}] {text}")
    return record


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)", report.nodeid)
    if not m:
        return
    key = int(m.group(1))
    if report.when == "call" or report.failed:
        prev = _OUTCOMES.get(key, "PASS")
        _OUTCOMES[key] = "FAIL" if report.failed or prev == "FAIL" else "PASS"


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for key in sorted(_OUTCOMES):
        extra = ACCEPTANCE_NOTES.get(key, "")
        tr.write_line(f"criterion {key:2d}: {_OUTCOMES[key]}" + (f"  ({extra})" if extra else ""))
