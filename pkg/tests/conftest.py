import os
import sys
from collections import OrderedDict

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number n")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n, title = mark.args[0], mark.args[1] if len(mark.args) > 1 else ""
    entry = _CRITERIA.setdefault(n, {"title": title, "passed": 0, "failed": 0})
    if rep.when == "call" and rep.passed:
        entry["passed"] += 1
    elif rep.failed or (rep.when == "call" and rep.skipped):
        entry["failed"] += 1


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        status = "PASS" if e["failed"] == 0 and e["passed"] > 0 else "FAIL"
        terminalreporter.write_line(
            f"criterion {n:>2} {status}  {e['title']}  ({e['passed']} passed, {e['failed']} failed)")
