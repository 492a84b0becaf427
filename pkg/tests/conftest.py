import numpy as np
import pytest

from strongmax.utils.descriptors import FunctionDescriptor
from strongmax.utils.enums import Shape
from strongmax.utils.grid import GridFunction


@pytest.fixture
def rng():
    return np.random.default_rng(20191017)


@pytest.fixture
def cube_1d():
    return FunctionDescriptor(Shape.CUBE, dim=1, extent=1.0)


@pytest.fixture
def cube_2d():
    return FunctionDescriptor(Shape.CUBE, dim=2, extent=1.0)


@pytest.fixture
def ball_2d():
    return FunctionDescriptor(Shape.BALL, dim=2, extent=1.0)


@pytest.fixture
def tent_1d():
    return FunctionDescriptor(Shape.TENT, dim=1, extent=1.0)


def make_grid(values, lo=0.0, hi=1.0) -> GridFunction:
    values = np.asarray(values, dtype=np.float64)
    return GridFunction((lo,) * values.ndim, (hi,) * values.ndim, values)
