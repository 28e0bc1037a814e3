import pytest

_ACCEPTANCE_LINES = []


def record_criterion(number: int, description: str, passed: bool, detail: str = ""):
    mark = "PASS" if passed else "FAIL"
    line = f"criterion {number:2d} [{mark}] {description}"
    if detail:
        line += f"  ({detail})"
    _ACCEPTANCE_LINES.append((number, line))


@pytest.hookimpl(trylast=True)
def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for _, line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
