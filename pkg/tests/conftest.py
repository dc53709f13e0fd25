import re

_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_acceptance\.py::test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    if report.when == "call" or report.failed or report.skipped:
        state = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        prev = _results.get(num)
        if prev is None or prev[0] == "PASS":
            _results[num] = (state, m.group(2).replace("_", " "))


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        state, name = _results[num]
        terminalreporter.write_line(f"criterion {num:2d}: {state}  {name}")
