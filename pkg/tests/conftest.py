"""Shared test fixtures: the acceptance-criterion recorder.

Each acceptance test wraps its body in `record(number, title, budget_s)`.
The context manager times the body, folds the runtime budget into the
verdict, collects one "ACCEPTANCE n: PASS/FAIL" line for the terminal
summary, and raises so that a failed criterion fails its test.
"""

import time

import pytest

_RESULTS = []


class CriterionRecord:
    """One criterion check: set .ok (and optionally .detail) in the body."""

    def __init__(self, number: int, title: str, budget_s: float):
        self.number = number
        self.title = title
        self.budget_s = budget_s
        self.ok = None
        self.detail = ""

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        elapsed = time.perf_counter() - self._t0
        parts = []
        if exc_type is not None:
            self.ok = False
            parts.append(f"{exc_type.__name__}: {exc}")
        elif self.ok is None:
            self.ok = False
            parts.append("criterion body set no verdict")
        if self.detail:
            parts.append(self.detail)
        if elapsed >= self.budget_s:
            self.ok = False
            parts.append(f"runtime budget exceeded: {elapsed:.1f}s >= {self.budget_s:.0f}s")
        else:
            parts.append(f"{elapsed:.1f}s of {self.budget_s:.0f}s budget")
        verdict = "PASS" if self.ok else "FAIL"
        line = f"ACCEPTANCE {self.number}: {verdict} - {self.title} ({'; '.join(parts)})"
        _RESULTS.append((self.number, line))
        print(line)
        if exc_type is not None:
            return False  # propagate the body's own exception
        if not self.ok:
            raise AssertionError(line)
        return False


@pytest.fixture
def record():
    def make(number: int, title: str, budget_s: float) -> CriterionRecord:
        return CriterionRecord(number, title, budget_s)

    return make


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_RESULTS):
        terminalreporter.write_line(line)
