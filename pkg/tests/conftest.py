import pytest

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "acceptance" not in report.keywords:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.head_line or report.nodeid
        if report.outcome == "passed":
            _acceptance.setdefault(name, "PASS")
        else:
            _acceptance[name] = "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items()):
        terminalreporter.write_line(f"{outcome}  {name}")
