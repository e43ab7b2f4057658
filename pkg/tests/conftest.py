import numpy as np
import pytest
import scipy.linalg

from hahnchain.chain import ChainSpec, build

N_GRID = list(range(3, 32, 2))
ETA_GRID = [0, 1, 2, 3]


def dense_propagator(op, t):
    """Brute-force exp(-itJ) by scaling and squaring (scipy)."""
    return scipy.linalg.expm(-1j * t * op.matrix())


def newton_divided_difference(x, f):
    """Classical recursive table; returns f[x_0, ..., x_N]."""
    x = np.asarray(x, dtype=float)
    col = np.array(f, dtype=complex if np.iscomplexobj(f) else float)
    n = x.size
    for j in range(1, n):
        col = (col[1:] - col[:-1]) / (x[j:] - x[:-j])
    return col[0]


@pytest.fixture
def asym3():
    return build(ChainSpec.asymmetric(3, 0))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
