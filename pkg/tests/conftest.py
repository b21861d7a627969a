import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[str, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        name = report.nodeid.split("::")[-1]
        doc = _criteria.get(name, (name, ""))[0]
        _criteria[name] = (doc, "PASS" if report.outcome == "passed" else "FAIL")


def pytest_collection_modifyitems(items):
    for item in items:
        if "test_acceptance.py" in item.nodeid:
            doc = (item.function.__doc__ or item.name).strip().splitlines()[0]
            _criteria[item.name] = (doc, "")


def pytest_terminal_summary(terminalreporter):
    done = {k: v for k, v in _criteria.items() if v[1]}
    if not done:
        return
    terminalreporter.section("acceptance criteria")
    for doc, verdict in done.values():
        terminalreporter.write_line(f"[{verdict}] {doc}")


@pytest.fixture(scope="session")
def euclid1():
    from continuum import get_pattern

    return get_pattern("euclid1")


@pytest.fixture(scope="session")
def euclid2():
    from continuum import get_pattern

    return get_pattern("euclid2")
