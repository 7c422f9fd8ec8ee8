from __future__ import annotations

_verdicts: list[str] = []


def pytest_runtest_logreport(report):
    # collect the one-line verdicts printed by the acceptance tests
    if report.when == "call":
        _verdicts.extend(line for line in report.capstdout.splitlines() if line.startswith("criterion "))


def pytest_terminal_summary(terminalreporter):
    if _verdicts:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_verdicts, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
