import pytest

from sessium.universe import default_universe
from sessium.sessiontypes import parse_type


@pytest.fixture(scope="session")
def u():
    return default_universe()


@pytest.fixture(scope="session")
def T(u):
    return lambda text, defs=None: parse_type(text, u, defs)
