import pytest

from momctl.metric import MetricMatrix

_acceptance_lines = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(name, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] {name}" + (f" -- {detail}" if detail else "")
        _acceptance_lines.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


@pytest.fixture
def triangle3():
    return MetricMatrix.from_pairs("abc", {("a", "b"): 1, ("a", "c"): 2, ("b", "c"): 2})


@pytest.fixture
def two_point():
    return MetricMatrix.from_pairs("ab", {("a", "b"): 1})
