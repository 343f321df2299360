import pytest

_RESULTS = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): numbered acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    number, title = mark.args
    status = "PASS" if rep.passed else "FAIL"
    _RESULTS.append((number, title, status, rep.duration))
    line = f"criterion {number:>2} {status}  {title}  ({rep.duration:.2f}s)"
    item.config.pluginmanager.get_plugin("terminalreporter").write_line(line)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number, title, status, duration in sorted(_RESULTS):
        terminalreporter.write_line(f"criterion {number:>2} {status}  {title}  ({duration:.2f}s)")
