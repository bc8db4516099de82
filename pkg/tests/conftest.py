from __future__ import annotations

import pytest

from nearadd.graph import Graph

_ACCEPTANCE: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def acceptance():
    """Record one pass/fail line for an acceptance criterion."""

    def record(label: str, ok: bool, detail: str = "") -> bool:
        prev = _ACCEPTANCE.get(label)
        if prev is not None:
            ok = ok and prev[0]
            detail = "; ".join(x for x in (prev[1], detail) if x)
        _ACCEPTANCE[label] = (ok, detail)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(_ACCEPTANCE, key=lambda s: (int(s.split()[0].rstrip(".")), s)):
        ok, detail = _ACCEPTANCE[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}  {detail}")


@pytest.fixture
def path3() -> Graph:
    return Graph(3, [(0, 1, 1), (1, 2, 1)])


@pytest.fixture
def triangle() -> Graph:
    return Graph(3, [(0, 1, 3), (0, 2, 1), (2, 1, 2)])
