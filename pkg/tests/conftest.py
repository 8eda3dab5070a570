import math

import numpy as np
import pytest

from poissonquad import get_pair

SQRT_2PI = math.sqrt(2 * math.pi)


def f3_hat_closed(v):
    """Transform of 1/(1+x^6) from the residues at e^{i pi/6}, i, e^{5 i pi/6}."""
    v = np.abs(np.asarray(v, dtype=float))
    return (math.pi / 3 * np.exp(-v)
            + 2 * math.pi / 3 * np.exp(-v / 2) * np.sin(math.sqrt(3) * v / 2 + math.pi / 6)) / SQRT_2PI


@pytest.fixture(scope="session")
def f1():
    return get_pair("f1")


@pytest.fixture(scope="session")
def f2():
    return get_pair("f2")


@pytest.fixture(scope="session")
def f3():
    return get_pair("f3")


@pytest.fixture(scope="session")
def gaussian():
    return get_pair("gaussian")


@pytest.fixture(scope="session")
def zero():
    return get_pair("zero")


@pytest.fixture(scope="session")
def hat():
    return get_pair("hat")


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict(request):
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
