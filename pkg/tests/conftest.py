import pytest

from raycat.families import diamond, dumbbell, penny_farthing
from raycat.raycore import build_ray_category


@pytest.fixture(scope="session")
def db33():
    return build_ray_category(dumbbell(3, 3))


@pytest.fixture(scope="session")
def db34():
    return build_ray_category(dumbbell(3, 4))


@pytest.fixture(scope="session")
def pf2():
    return build_ray_category(penny_farthing(2, (1,)))


@pytest.fixture(scope="session")
def pf1():
    return build_ray_category(penny_farthing(1))


@pytest.fixture(scope="session")
def dia():
    return build_ray_category(diamond())
