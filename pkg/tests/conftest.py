import math
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from coronal.codes import parse_code  # noqa: E402
from coronal.sets import CodeSet  # noqa: E402

import patches  # noqa: E402

TRIPLE_CODES = {0: (2, 2, 1, 2, 1), 1: (2, 1, 2, 0, 2, 0)}


@pytest.fixture(scope="session")
def triple_set():
    return CodeSet(3, [parse_code("0:22121", 3), parse_code("1:212020", 3)])


@pytest.fixture(scope="session")
def triple_radii():
    return patches.triple_radii()


@pytest.fixture(scope="session")
def triple_discs(triple_radii):
    return patches.grown_patch(triple_radii.tolist(), TRIPLE_CODES, 3.5)


@pytest.fixture(scope="session")
def hex_discs():
    return patches.hexagonal_patch()


@pytest.fixture(scope="session")
def square_discs():
    return patches.square_patch()


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


SQRT2_M1 = math.sqrt(2) - 1
TRI = 2 / math.sqrt(3) - 1


# criterion number -> PASS/FAIL line, filled by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
