import pytest

from currentcoh import catalog


@pytest.fixture(scope="session")
def osc():
    return catalog.oscillator()


@pytest.fixture(scope="session")
def heis():
    return catalog.heisenberg()
