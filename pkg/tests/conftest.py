import pytest
from hypothesis import settings

from peorl.domains import load_domain

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(scope="session")
def gridworld():
    return load_domain("gridworld")


@pytest.fixture(scope="session")
def taxi1():
    return load_domain("taxi1")


@pytest.fixture(scope="session")
def taxi2():
    return load_domain("taxi2")
