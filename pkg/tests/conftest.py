import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    # echo the acceptance PASS/FAIL lines after the run; the terminal
    # writer bypasses fd-level capture, so they always reach stdout
    for name, mod in sys.modules.items():
        if name.endswith("test_acceptance") and getattr(mod, "RESULTS", None):
            terminalreporter.section("acceptance criteria")
            for line in mod.RESULTS:
                terminalreporter.write_line(line)
