import numpy as np
import pytest

from evwt import decompose, make_toy_image


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


@pytest.fixture(scope="session")
def toy_image():
    return make_toy_image()


@pytest.fixture(scope="session")
def toy_decomposition(toy_image):
    return decompose(toy_image)
