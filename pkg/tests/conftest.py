import pytest
from hypothesis import settings

# First calls load compiled kernels, which would trip per-example deadlines.
settings.register_profile("default", deadline=None)
settings.load_profile("default")

ACCEPTANCE_RESULTS: dict[str, bool] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    label = marker.args[0]
    ACCEPTANCE_RESULTS[label] = ACCEPTANCE_RESULTS.get(label, True) and report.passed


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion covered by the test")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(ACCEPTANCE_RESULTS, key=lambda s: int(s.split(".")[0])):
        status = "PASS" if ACCEPTANCE_RESULTS[label] else "FAIL"
        terminalreporter.write_line(f"[{status}] {label}")
