import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    key = (str(marker.args[0]), marker.args[1])
    if report.when == "call" or (report.when == "setup" and report.failed):
        ok = report.passed
        _CRITERIA.setdefault(key, []).append(ok)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (number, title), results in sorted(_CRITERIA.items(), key=lambda kv: kv[0][0]):
        status = "PASS" if all(results) else "FAIL"
        terminalreporter.write_line(f"criterion {number:<3} {status}  {title}")
