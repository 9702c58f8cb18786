from pathlib import Path

import pytest

from atilde import presentation as pres
from atilde.words import Group

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def tp2():
    return pres.load(FIXTURES / "tp_n2_q2.txt")


@pytest.fixture(scope="session")
def G2(tp2):
    G = Group(tp2)
    G.check_triples = True
    return G


@pytest.fixture(scope="session")
def tp3():
    return pres.load(FIXTURES / "tp_n2_q3.txt")


@pytest.fixture(scope="session")
def G3(tp3):
    return Group(tp3)
