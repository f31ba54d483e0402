import random

import pytest

from kisinlab.config_manager import use_settings
from kisinlab.field import field_params


@pytest.fixture(autouse=True)
def quiet_settings():
    """No progress bars and a small worker pool in tests"""
    with use_settings(show_progress=False, max_workers=2) as settings:
        yield settings


@pytest.fixture
def F2():
    return field_params(2)


@pytest.fixture
def F3():
    return field_params(3)


@pytest.fixture
def F4():
    return field_params(2, 2)


@pytest.fixture
def F5():
    return field_params(5)


@pytest.fixture
def rng():
    return random.Random(1234)
