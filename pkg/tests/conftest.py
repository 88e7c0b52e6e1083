from smartmatch.saturation import GUARD


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    status = "PASS" if GUARD.violations == 0 and GUARD.steps > 0 else "FAIL"
    terminalreporter.write_line(
        f"[{status}] criterion 7 (whole session): {GUARD.steps} demodulation steps checked, "
        f"{GUARD.violations} ordering violations")


def pytest_sessionfinish(session, exitstatus):
    if GUARD.violations:
        session.exitstatus = 1
