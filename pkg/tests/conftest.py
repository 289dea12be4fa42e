import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

ACCEPTANCE = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = {}


@pytest.fixture
def acceptance(request):
    """``record(criterion, title, check, ok, detail)`` for the summary table."""
    table = request.config.stash[ACCEPTANCE]

    def record(criterion: int, title: str, check: str, ok: bool, detail: str) -> bool:
        table.setdefault(criterion, (title, []))[1].append((check, bool(ok), detail))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    table = config.stash[ACCEPTANCE]
    if not table:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(table):
        title, checks = table[criterion]
        ok = all(c[1] for c in checks)
        failed = [f"{name} ({detail})" for name, good, detail in checks if not good]
        detail = "; ".join(failed) if failed else "; ".join(f"{n}: {d}" for n, _, d in checks)
        terminalreporter.write_line(f"criterion {criterion} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
