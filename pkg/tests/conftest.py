import numpy as np
import pytest

from bqpcolor.graph import parse_dimacs
from bqpcolor.transform import QuboModel, build_linear_model, to_qubo

CYCLE4 = "p edge 4 4\ne 1 2\ne 1 4\ne 2 3\ne 3 4\n"

# the 8x8 matrix printed for the 4-cycle, K=2, P=-5; order x11 x12 x21 ... x42
PRINTED_Q = np.array([
    [4, -5, -5, 0, 0, 0, -5, 0],
    [-5, 3, 0, -5, 0, 0, 0, -5],
    [-5, 0, 4, -5, -5, 0, 0, 0],
    [0, -5, -5, 3, 0, -5, 0, 0],
    [0, 0, -5, 0, 4, -5, -5, 0],
    [0, 0, 0, -5, -5, 3, 0, -5],
    [-5, 0, 0, 0, -5, 0, 4, -5],
    [0, -5, 0, 0, 0, -5, -5, 3],
])
PRINTED_CONSTANT = -20
# x11 = x22 = x31 = x42 = 1
PRINTED_OPTIMUM_X = np.array([1, 0, 0, 1, 1, 0, 0, 1], dtype=np.int8)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def cycle4():
    return parse_dimacs(CYCLE4, name="cycle4")


@pytest.fixture
def golden_model(cycle4):
    return build_linear_model(cycle4, 2)


@pytest.fixture
def golden_qubo(golden_model):
    return to_qubo(golden_model, -5)


def random_qubo(rng: np.random.Generator, n: int, density: float = 0.3, scale: int = 50) -> QuboModel:
    Q = rng.integers(-scale, scale + 1, size=(n, n))
    mask = rng.random((n, n)) < density
    Q = np.where(mask, Q, 0)
    Q = np.triu(Q, 1)
    Q = Q + Q.T
    np.fill_diagonal(Q, rng.integers(-scale, scale + 1, size=n))
    return QuboModel.from_dense(Q, int(rng.integers(-100, 101)))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
