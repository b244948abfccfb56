"""Shared pytest hooks.

The acceptance tests record a verdict per criterion in ``CRITERIA``; the
terminal summary prints one PASS/FAIL line for each.
"""

CRITERIA: dict[int, tuple[str, bool, str]] = {}


def record(number: int, title: str, ok: bool, detail: str = "") -> None:
    CRITERIA[number] = (title, bool(ok), detail)
    line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title}"
    print(line + (f" ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(CRITERIA):
        title, ok, detail = CRITERIA[number]
        line = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}: {title}"
        terminalreporter.write_line(line + (f" ({detail})" if detail else ""))
