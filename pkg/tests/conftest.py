import random

import pytest

from geofence import bilinear


@pytest.fixture(scope="session")
def params62():
    return bilinear.gen_params(62, 7)


@pytest.fixture(scope="session")
def params16():
    return bilinear.gen_params(16, 7)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
