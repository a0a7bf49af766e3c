"""Prints one pass/fail line per acceptance criterion at the end of the run."""

_results = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _results[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    import test_acceptance

    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in sorted(_results.items()):
        name = nodeid.split("::")[-1]
        number = int(name.split("_")[2])
        doc = (getattr(test_acceptance, name).__doc__ or "").strip()
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {verdict}  {doc}")
