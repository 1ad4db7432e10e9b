import pytest

from nexpansive.space import AugSystem


@pytest.fixture(scope="session")
def sys2():
    return AugSystem(2, "standard", 64)


@pytest.fixture(scope="session")
def sys3():
    return AugSystem(3, "standard", 64)


@pytest.fixture(scope="session")
def sys5():
    return AugSystem(5, "standard", 64)


@pytest.fixture(scope="session")
def fe():
    return AugSystem(3, "finite_expansive", 64)
