import os
import sys
from collections import defaultdict

sys.path.insert(0, os.path.dirname(__file__))

_criteria: dict[int, list[tuple[str, str]]] = defaultdict(list)
_criterion_of: dict[str, int] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        marker = item.get_closest_marker("criterion")
        if marker is not None:
            _criterion_of[item.nodeid] = int(marker.args[0])


def pytest_runtest_logreport(report):
    n = _criterion_of.get(report.nodeid)
    if n is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _criteria[n].append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        results = _criteria[n]
        failed = [name for name, outcome in results if outcome != "passed"]
        status = "PASS" if not failed else "FAIL"
        line = f"criterion {n:>2}: {status}  ({len(results) - len(failed)}/{len(results)} checks)"
        if failed:
            line += "  failed: " + ", ".join(failed)
        terminalreporter.write_line(line)
