import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

from hypothesis import settings  # noqa: E402

import _report  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def pytest_terminal_summary(terminalreporter):
    if _report.LINES:
        terminalreporter.section("acceptance criteria")
        for line in _report.LINES:
            terminalreporter.write_line(line)
