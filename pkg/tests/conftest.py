import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from qnchroma import cube  # noqa: E402
from qnchroma.colourings import BLUE, RED, Colouring  # noqa: E402

ACCEPTANCE_LINES: list[str] = []


def make_colouring(n, r, colour_of_edge):
    data = np.zeros(cube.num_edges(n), dtype=np.uint8)
    for e in range(data.size):
        u, w = cube.edge_endpoints(e, n)
        data[e] = colour_of_edge(u, w)
    return Colouring(n, r, data)


@pytest.fixture
def square():
    """Q_2 with both edges at 00 red and both edges at 11 blue."""
    return make_colouring(2, 2, lambda u, w: RED if 0 in (u, w) else BLUE)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
