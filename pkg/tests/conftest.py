import pytest
from gmpy2 import mpq

from polyconvex.polyhedra import HPolyhedron, h_to_v


def Q(*xs):
    return tuple(mpq(x) for x in xs)


def interval(lo, hi):
    return HPolyhedron.box([lo], [hi])


def square(lo, hi, n=2):
    return HPolyhedron.box([lo] * n, [hi] * n)


def vertex_set(P):
    return set(h_to_v(P).vertices)


@pytest.fixture
def unit_square():
    return square(0, 1)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import CRITERION_LINES

    if CRITERION_LINES:
        terminalreporter.section("acceptance criteria")
        for line in CRITERION_LINES:
            terminalreporter.write_line(line)
