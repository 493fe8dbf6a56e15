import numpy as np
import pytest

from pi2ch.spectral import GridSpec, PeriodicField


@pytest.fixture
def grid64():
    return GridSpec(64)


@pytest.fixture
def grid128():
    return GridSpec(128)


@pytest.fixture
def grid256():
    return GridSpec(256)


def sin_field(grid, k=1):
    return PeriodicField.from_function(grid, lambda x: np.sin(2 * np.pi * k * x))


def cos_field(grid, k=1):
    return PeriodicField.from_function(grid, lambda x: np.cos(2 * np.pi * k * x))
