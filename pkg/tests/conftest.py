import pytest

from app.core.graphs import path, random_bounded, star
from app.core.noise import NoiseModel


@pytest.fixture
def star4():
    return star(4)


@pytest.fixture
def path3():
    return path(3)


@pytest.fixture
def small_random():
    return random_bounded(16, 4, seed=3)


@pytest.fixture
def quiet():
    return NoiseModel(0.0, 1)
