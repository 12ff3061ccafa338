from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

_RESULTS: dict[int, tuple[str, float, str]] = {}


class Criterion:
    def __init__(self):
        self.detail = ""

    @contextmanager
    def run(self, number: int, limit: float):
        start = time.perf_counter()
        try:
            yield self
        except BaseException as exc:
            took = time.perf_counter() - start
            _RESULTS[number] = ("FAIL", took, f"{type(exc).__name__}: {exc}".splitlines()[0])
            print(f"criterion {number}: FAIL ({took:.2f}s)")
            raise
        took = time.perf_counter() - start
        if took >= limit:
            _RESULTS[number] = ("FAIL", took, f"took {took:.2f}s, limit {limit}s")
            print(f"criterion {number}: FAIL ({took:.2f}s > {limit}s)")
            pytest.fail(f"criterion {number} exceeded its {limit}s limit ({took:.2f}s)")
        _RESULTS[number] = ("PASS", took, self.detail)
        print(f"criterion {number}: PASS ({took:.2f}s) {self.detail}")


@pytest.fixture
def criterion():
    return Criterion()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_RESULTS):
        status, took, detail = _RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {took:7.2f}s  {detail}")
