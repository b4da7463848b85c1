import pytest

from strandjoin.arc_diagram import Z0, Z1, Z2
from strandjoin.strands import enumerate_basis


@pytest.fixture(scope="session")
def am0():
    return enumerate_basis(Z0)


@pytest.fixture(scope="session")
def am1():
    return enumerate_basis(Z1)


@pytest.fixture(scope="session")
def am2():
    return enumerate_basis(Z2)
