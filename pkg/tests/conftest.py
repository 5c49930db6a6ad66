import pytest

from griddy import formula as fml

FIG1_TEXT = "p nae3sat 4 3\n1 2 3 0\n1 2 4 0\n-1 3 4 0\n"

XXX_TEXT = "p nae3sat 1 1\n1 1 1 0\n"

UNSAT_N2_TEXT = "p nae3sat 2 4\n1 1 2 0\n1 1 -2 0\n-1 -1 2 0\n-1 -1 -2 0\n"


@pytest.fixture
def fig1():
    """The running example: (X1,X2,X3), (X1,X2,X4), (-X1,X3,X4)."""
    return fml.parse_formula(FIG1_TEXT)


@pytest.fixture
def xxx():
    """(X1,X1,X1): NAE-unsatisfiable with one variable."""
    return fml.parse_formula(XXX_TEXT)


@pytest.fixture
def unsat_n2():
    """The NAE-unsatisfiable 2-variable, 4-clause instance."""
    return fml.parse_formula(UNSAT_N2_TEXT)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import _LINES
    except ImportError:
        return
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)


def simple_graph(n, edges):
    from griddy.lattice import Graph

    return Graph(n=n, edges=tuple(sorted(tuple(sorted(e)) for e in edges)),
                 labels=tuple((f"v{i}",) for i in range(n)))
