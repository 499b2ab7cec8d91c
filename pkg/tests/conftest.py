import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record a one-line PASS/FAIL summary for an acceptance criterion."""
    entry = {}
    ACCEPTANCE_LINES.append(entry)

    def record(number, title, passed, detail=""):
        entry.update(number=number, title=title, passed=passed, detail=detail)
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title}" + (f" ({detail})" if detail else "")
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    done = [e for e in ACCEPTANCE_LINES if e]
    if not done:
        return
    terminalreporter.section("acceptance criteria")
    for e in sorted(done, key=lambda e: e["number"]):
        status = "PASS" if e["passed"] else "FAIL"
        detail = f" ({e['detail']})" if e["detail"] else ""
        terminalreporter.write_line(f"[{status}] criterion {e['number']}: {e['title']}{detail}")
