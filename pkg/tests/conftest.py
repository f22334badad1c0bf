import pytest

_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when not in ("setup", "call"):
        return
    number, title = mark.args
    if report.when == "call" or report.failed:
        detail = ""
        if report.failed:
            detail = str(report.longrepr.reprcrash.message if hasattr(report.longrepr, "reprcrash")
                         else report.longrepr).splitlines()[0]
        _, ok, old = _CRITERIA.get(number, (title, True, ""))
        _CRITERIA[number] = (title, ok and report.passed, old or detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok, detail = _CRITERIA[number]
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
