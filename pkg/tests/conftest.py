"""Prints one PASS/FAIL line per acceptance criterion at the end of the run."""

_ACCEPTANCE = []


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        props = dict(report.user_properties)
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome, props))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, props in sorted(_ACCEPTANCE):
        status = "PASS" if outcome == "passed" else "FAIL"
        detail = " ".join(f"{k}={v}" for k, v in props.items())
        terminalreporter.write_line(f"{status}  {name}  {detail}".rstrip())
