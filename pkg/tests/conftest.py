"""Shared test plumbing: the acceptance-criterion verdict board.

Acceptance tests record one verdict line per criterion; printing them from
inside a test would be swallowed by output capture, so they are replayed
in the terminal summary after the run.
"""

CRITERION_VERDICTS = []


def record_verdict(number, passed, detail):
    verdict = "PASS" if passed else "FAIL"
    CRITERION_VERDICTS.append(f"[criterion {number}] {verdict} — {detail}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERION_VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(CRITERION_VERDICTS):
        terminalreporter.write_line(line)
