"""Collects acceptance verdicts and prints them after the run."""

VERDICTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(VERDICTS, key=lambda v: int(v[0].split()[1].rstrip("abcd"))):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
