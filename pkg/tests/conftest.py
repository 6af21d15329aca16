import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # replay acceptance verdict lines after capture is torn down so they
    # show up in piped and quiet runs alike
    mod = sys.modules.get("test_acceptance") or sys.modules.get(
        "tests.test_acceptance"
    )
    lines = getattr(mod, "VERDICTS", None) if mod else None
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
