import numpy as np
import pytest

from fock.schemas import FockSpace


@pytest.fixture
def space4() -> FockSpace:
    return FockSpace(dim=4)


@pytest.fixture
def space8() -> FockSpace:
    return FockSpace(dim=8)


@pytest.fixture
def space16() -> FockSpace:
    return FockSpace(dim=16)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)
