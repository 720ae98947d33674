from pathlib import Path

import pytest

from src import catalog
from src.algebra import RBLeibnizAlgebra

FIXTURES = {
    "plane": lambda: catalog.plane(1),
    "plane-b0": lambda: catalog.plane(0),
    "solvable3": lambda: catalog.solvable3(1, 1),
    "solvable3-2-3": lambda: catalog.solvable3(2, -3),
    "solvable3-idempotent": catalog.solvable3_idempotent,
    "heisenberg": catalog.heisenberg_automorphic,
    "abelian2": lambda: catalog.abelian(2, [[1, 2], [0, -1]]),
}


@pytest.fixture
def data_dir() -> Path:
    return Path(__file__).parent / "data"


@pytest.fixture
def plane() -> RBLeibnizAlgebra:
    return catalog.plane(1)


@pytest.fixture
def solvable3() -> RBLeibnizAlgebra:
    return catalog.solvable3(1, 1)


@pytest.fixture(params=list(FIXTURES), ids=list(FIXTURES))
def fixture_algebra(request: pytest.FixtureRequest) -> RBLeibnizAlgebra:
    return FIXTURES[request.param]()
