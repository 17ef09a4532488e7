from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from pcrank import PCMatrix, build_matrix  # noqa: E402

EXAMPLE_UPPER = [1 / 2, 2, 5, 4, 4, 5]
EXAMPLE_TEXT = """\
# 4x4 example
1    1/2  2    5
2    1    4    4
1/2  1/4  1    5
1/5  1/4  1/5  1
"""
EXAMPLE_EVM = [0.282, 0.474, 0.179, 0.065]
EXAMPLE_GMM = [0.294, 0.468, 0.175, 0.062]

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def example_matrix() -> PCMatrix:
    return build_matrix(EXAMPLE_UPPER, 4)


@pytest.fixture
def example_file(tmp_path) -> Path:
    p = tmp_path / "example.txt"
    p.write_text(EXAMPLE_TEXT, encoding="utf-8")
    return p


def random_pc(rng: np.random.Generator, n: int, spread: float = 9.0) -> PCMatrix:
    m = n * (n - 1) // 2
    return PCMatrix(np.exp(rng.uniform(-np.log(spread), np.log(spread), m)), n)


@st.composite
def pc_matrices(draw, min_n: int = 2, max_n: int = 7, max_log: float = 5.0) -> PCMatrix:
    n = draw(st.integers(min_n, max_n))
    logs = draw(st.lists(st.floats(-max_log, max_log), min_size=n * (n - 1) // 2,
                         max_size=n * (n - 1) // 2))
    return PCMatrix(np.exp(logs), n)


@st.composite
def weight_vectors(draw, min_n: int = 2, max_n: int = 8, n: int | None = None) -> np.ndarray:
    size = n if n is not None else draw(st.integers(min_n, max_n))
    logs = draw(st.lists(st.floats(-5, 5), min_size=size, max_size=size))
    return np.exp(logs)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
