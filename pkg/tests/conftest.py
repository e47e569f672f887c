import pytest

ACCEPTANCE_LINES: list = []


@pytest.fixture
def criterion(request):
    """Record a one-line verdict for an acceptance criterion."""
    import time
    from contextlib import contextmanager

    @contextmanager
    def run(number: int, title: str, budget: float):
        start = time.perf_counter()
        ok = False
        try:
            yield
            ok = True
        finally:
            elapsed = time.perf_counter() - start
            within = elapsed < budget
            verdict = "PASS" if ok and within else "FAIL"
            note = "" if within else f" (over budget {budget:.0f}s)"
            ACCEPTANCE_LINES.append(f"criterion {number:2d}: {verdict}  {title}  [{elapsed:.1f}s]{note}")
        assert within, f"criterion {number} took {elapsed:.1f}s, budget {budget}s"

    return run


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
