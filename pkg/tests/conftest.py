import pytest

from kansim.abelian import parse_group
from kansim.em import em_space


@pytest.fixture(scope="session")
def em_z2():
    return em_space(parse_group("Z/2"), 1, 3)


@pytest.fixture(scope="session")
def em_z3():
    return em_space(parse_group("Z/3"), 1, 3)


@pytest.fixture(scope="session")
def em_z2_dim2():
    return em_space(parse_group("Z/2"), 2, 4)
