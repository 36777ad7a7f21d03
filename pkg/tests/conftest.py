from hypothesis import settings

import _support

settings.register_profile("repro", derandomize=True, deadline=None)
settings.load_profile("repro")


def pytest_terminal_summary(terminalreporter):
    if _support.ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _support.ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
