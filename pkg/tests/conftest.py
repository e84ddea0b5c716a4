import pytest

# acceptance criteria outcomes: number -> (passed, title, detail)
ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """A dict the test fills with a one-line "detail" for the summary."""
    info = {"detail": ""}
    request.node.criterion_info = info
    return info


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call":
        return
    number, title = marker.args
    if report.passed:
        ACCEPTANCE[number] = (True, title, getattr(item, "criterion_info", {}).get("detail", ""))
    else:
        crash = getattr(report.longrepr, "reprcrash", None)
        ACCEPTANCE[number] = (False, title, crash.message.splitlines()[0] if crash else "failed")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, title, detail = ACCEPTANCE[number]
        line = f"criterion {number:2d} {'PASS' if passed else 'FAIL'}  {title}"
        terminalreporter.write_line(f"{line}  [{detail}]" if detail else line)
