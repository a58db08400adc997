import time

import pytest

_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion: ``with criterion(n, title, budget_s): ...``."""

    class Recorder:
        def __call__(self, number, title, budget=None):
            self.number, self.title, self.budget = number, title, budget
            return self

        def __enter__(self):
            self.start = time.perf_counter()
            return self

        def __exit__(self, exc_type, exc, tb):
            elapsed = time.perf_counter() - self.start
            over = self.budget is not None and elapsed > self.budget
            ok = exc_type is None and not over
            _CRITERIA.append((self.number, self.title, ok, elapsed, self.budget))
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {self.number}: {self.title} ({elapsed:.2f}s)")
            if exc_type is None and over:
                raise AssertionError(f"criterion {self.number} took {elapsed:.2f}s, budget {self.budget}s")
            return False

    return Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, elapsed, budget in sorted(_CRITERIA):
        limit = f" / {budget:g}s" if budget is not None else ""
        terminalreporter.write_line(
            f"{'PASS' if ok else 'FAIL'}  {number:>2}. {title}  [{elapsed:.2f}s{limit}]"
        )
