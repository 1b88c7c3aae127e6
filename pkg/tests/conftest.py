import pytest

from omegasum import build_spf


@pytest.fixture(scope="session")
def spf1000():
    return build_spf(1000)


@pytest.fixture(scope="session")
def spf5000():
    return build_spf(5000)
