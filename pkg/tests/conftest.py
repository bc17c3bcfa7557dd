import os
import sys

HERE = os.path.dirname(__file__)
sys.path.insert(0, HERE)

from acceptance_log import LOG  # noqa: E402


def pytest_terminal_summary(terminalreporter):
    if not LOG:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for n in sorted(LOG):
        title, ok, secs, budget = LOG[n]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {title}  ({secs:.1f} s, limit {budget} s)")
