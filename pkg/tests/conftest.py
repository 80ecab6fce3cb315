import sys

import pytest

sys.path.insert(0, "src")

from galoislines.autgroup import build_full_group
from galoislines.curve import EmbeddedCurve
from galoislines.field import make_tower


@pytest.fixture(scope="session")
def tower5():
    return make_tower(5, 1, 4)


@pytest.fixture(scope="session")
def curve5(tower5):
    return EmbeddedCurve(tower5)


@pytest.fixture(scope="session")
def aut5(tower5):
    return build_full_group(tower5, verify=True)


@pytest.fixture(scope="session")
def tower7():
    return make_tower(7, 1, 4)


@pytest.fixture(scope="session")
def curve7(tower7):
    return EmbeddedCurve(tower7)


@pytest.fixture(scope="session")
def tower9():
    return make_tower(3, 2, 4)


@pytest.fixture(scope="session")
def curve9(tower9):
    return EmbeddedCurve(tower9)
