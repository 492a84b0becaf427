import json
import math

import numpy as np
import pytest

from strongmax.utils.descriptors import FunctionDescriptor, build_grid_function
from strongmax.utils.enums import Shape, Variant
from strongmax.utils.exceptions import DescriptorError


def test_from_json_inline():
    descriptor = FunctionDescriptor.from_json(
        '{"shape": "cube", "half_width": 1.5, "height": 0.5, "dim": 2}'
    )
    assert descriptor.shape is Shape.CUBE
    assert descriptor.dim == 2
    assert descriptor.extent == 1.5
    assert descriptor.height == 0.5


def test_ball_uses_radius():
    descriptor = FunctionDescriptor.from_dict({"shape": "ball", "radius": 2, "dim": 3})
    assert descriptor.extent == 2.0
    assert descriptor.to_dict()["radius"] == 2.0


def test_default_dim():
    data = {"shape": "cube", "half_width": 1}
    assert FunctionDescriptor.from_dict(data).dim == 1
    assert FunctionDescriptor.from_dict(data, default_dim=3).dim == 3


@pytest.mark.parametrize(
    "data",
    [
        {"shape": "pyramid", "half_width": 1},
        {"half_width": 1},
        {"shape": "cube", "half_width": 0},
        {"shape": "cube", "half_width": 1, "height": -1},
        {"shape": "ball"},
        {"shape": "cube", "half_width": 1, "dim": 4},
        {"shape": "cube", "half_width": 1, "cells": [0]},
        {"shape": "cube", "half_width": 1, "dim": 2, "cells": [4]},
        {"shape": "samples", "file": "f.csv"},
    ],
)
def test_invalid_descriptor(data):
    with pytest.raises(DescriptorError):
        FunctionDescriptor.from_dict(data)


def test_invalid_json():
    with pytest.raises(DescriptorError):
        FunctionDescriptor.from_json("{not json")


def test_missing_file(tmp_path):
    with pytest.raises(DescriptorError):
        FunctionDescriptor.from_json(str(tmp_path / "missing.json"))


def test_samples_relative_to_descriptor(tmp_path):
    (tmp_path / "f.csv").write_text("1,2,3\n4,5,6\n")
    (tmp_path / "f.json").write_text(
        json.dumps(
            {
                "shape": "samples",
                "file": "f.csv",
                "box_lo": [0, 0],
                "box_hi": [2, 3],
                "cells": [2, 3],
            }
        )
    )
    descriptor = FunctionDescriptor.from_json(str(tmp_path / "f.json"))
    f = build_grid_function(descriptor)
    np.testing.assert_array_equal(f.values, [[1, 2, 3], [4, 5, 6]])
    assert f.mass == 21.0
    assert descriptor.peak is None
    assert descriptor.analytic_mass is None


def test_samples_shape_mismatch(tmp_path):
    path = tmp_path / "f.csv"
    path.write_text("1,2,3\n")
    descriptor = FunctionDescriptor(
        Shape.SAMPLES, dim=1, file=str(path), box_lo=(0.0,), box_hi=(1.0,), cells=(4,)
    )
    with pytest.raises(DescriptorError):
        build_grid_function(descriptor)


@pytest.mark.parametrize(
    "shape,dim,extent,height,mass",
    [
        (Shape.CUBE, 2, 1.0, 0.5, 2.0),
        (Shape.CUBE, 3, 0.5, 1.0, 1.0),
        (Shape.BALL, 2, 1.0, 1.0, math.pi),
        (Shape.BALL, 3, 1.0, 2.0, 8 * math.pi / 3),
        (Shape.TENT, 1, 2.0, 1.5, 3.0),
    ],
)
def test_analytic_mass(shape, dim, extent, height, mass):
    descriptor = FunctionDescriptor(shape, dim=dim, extent=extent, height=height)
    assert descriptor.analytic_mass == pytest.approx(mass)


def test_default_geometry(cube_2d):
    f = build_grid_function(cube_2d)
    assert f.cells == (64, 64)
    assert f.box_lo == (-4.0, -4.0)
    assert f.box_hi == (4.0, 4.0)
    # cube edges fall on cell edges, so the sampled mass is exact
    assert f.mass == pytest.approx(4.0, rel=1e-12)


def test_tent_sampling():
    descriptor = FunctionDescriptor(
        Shape.TENT,
        dim=1,
        extent=1.0,
        height=2.0,
        box_lo=(-1.0,),
        box_hi=(1.0,),
        cells=(4,),
    )
    f = build_grid_function(descriptor)
    np.testing.assert_allclose(f.values, [0.5, 1.5, 1.5, 0.5])


def test_profiles_carry_height_on_first_axis():
    descriptor = FunctionDescriptor(Shape.CUBE, dim=3, extent=2.0, height=0.5)
    profiles = descriptor.profiles(Variant.CENTERED)
    assert [p.height for p in profiles] == [0.5, 1.0, 1.0]
    assert all(p.half_width == 2.0 for p in profiles)
    assert all(p.variant is Variant.CENTERED for p in profiles)


def test_ball_is_not_separable(ball_2d):
    assert not ball_2d.is_separable
    with pytest.raises(DescriptorError):
        ball_2d.profiles()


def test_with_geometry_keeps_given_values():
    descriptor = FunctionDescriptor(Shape.CUBE, dim=1, extent=1.0, cells=(10,))
    filled = descriptor.with_geometry((-3.0,), (3.0,), (20,))
    assert filled.cells == (10,)
    assert filled.box_lo == (-3.0,)
    boxed = filled.with_box_half_width(5.0)
    assert boxed.box_lo == (-5.0,) and boxed.box_hi == (5.0,)
