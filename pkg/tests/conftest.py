import sys


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    results = sorted(getattr(module, "RESULTS", []), key=lambda r: r.number)
    if results:
        terminalreporter.section("acceptance criteria")
        for r in results:
            terminalreporter.write_line(r.line())
