import pytest
from hypothesis import settings

from revflow import conformance, rint

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")

LOOP_SRC = "from x1 do x1 += 1; x2 += -1 until x2"


@pytest.fixture(scope="session")
def loop_prog():
    return rint.parse(LOOP_SRC)


@pytest.fixture(scope="session")
def corpus5():
    """Every program of size at most 5 over two variables, constants -1,0,1."""
    return list(conformance.enumerate_programs(5, k=2))
