import numpy as np
import pytest

from cyclic6j.algebra import RootData
from cyclic6j.fixtures import boundary4simplex_scene


@pytest.fixture(scope="session")
def root3() -> RootData:
    return RootData(3)


@pytest.fixture(scope="session")
def root5() -> RootData:
    return RootData(5)


@pytest.fixture(scope="session")
def fixture_scene():
    return boundary4simplex_scene()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260823)
