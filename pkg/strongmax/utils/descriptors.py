import json
import logging
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np

from strongmax.utils.defaults import DEFAULT_BOX_SCALE, DEFAULT_RESOLUTION
from strongmax.utils.enums import Shape, Variant
from strongmax.utils.exceptions import DescriptorError
from strongmax.utils.grid import MAX_DIMENSION, GridFunction
from strongmax.utils.profiles import Profile1D

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FunctionDescriptor:
    """
    Declarative description of a test function and the grid it is sampled on.

    ``extent`` is the half-width (cube, tent) or radius (ball); sample files
    carry their own box and cell counts.
    """

    shape: Shape
    dim: int
    extent: Optional[float] = None
    height: float = 1.0
    file: Optional[str] = None
    box_lo: Optional[Tuple[float, ...]] = None
    box_hi: Optional[Tuple[float, ...]] = None
    cells: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if not 1 <= self.dim <= MAX_DIMENSION:
            raise DescriptorError(f"Dimension must be 1-{MAX_DIMENSION}: {self.dim}")
        if self.shape is Shape.SAMPLES:
            if not self.file:
                raise DescriptorError("Sample descriptors need a 'file'")
            if self.box_lo is None or self.box_hi is None or self.cells is None:
                raise DescriptorError("Sample descriptors need box_lo, box_hi, cells")
        else:
            if self.extent is None or not self.extent > 0:
                raise DescriptorError(f"Size of a {self.shape.value} must be positive")
            if not self.height > 0:
                raise DescriptorError(f"Height must be positive: {self.height}")
        for name in ("box_lo", "box_hi", "cells"):
            value = getattr(self, name)
            if value is not None and len(value) != self.dim:
                raise DescriptorError(f"'{name}' must have {self.dim} entries")
        if self.cells is not None and any(c < 1 for c in self.cells):
            raise DescriptorError(f"Resolution must be positive: {self.cells}")

    @classmethod
    def from_dict(
        cls,
        data: dict,
        base_dir: Optional[Path] = None,
        default_dim: Optional[int] = None,
    ):
        """
        Parses a JSON-style descriptor dictionary.

        Parameters
        ----------
        data : dict
            E.g. ``{"shape": "cube", "half_width": 1.0, "height": 1.0, "dim": 2}``.
        base_dir : Path, optional
            Directory that relative sample-file paths are resolved against.
        default_dim : int, optional
            Dimension used when neither "dim" nor a box or cell list is given.

        Returns
        -------
        FunctionDescriptor
            The parsed descriptor.
        """

        try:
            shape = Shape(data["shape"])
        except (KeyError, ValueError):
            raise DescriptorError(f"Unknown or missing shape: {data.get('shape')!r}")
        box_lo = _optional_tuple(data.get("box_lo"), float)
        box_hi = _optional_tuple(data.get("box_hi"), float)
        cells = _optional_tuple(data.get("cells"), int)
        dim = data.get("dim")
        if dim is None:
            known = next((v for v in (box_lo, box_hi, cells) if v is not None), None)
            if known is not None:
                dim = len(known)
            else:
                dim = default_dim or 1
        file = data.get("file")
        if file is not None and base_dir is not None and not Path(file).is_absolute():
            file = str(Path(base_dir) / file)
        extent = data.get("radius" if shape is Shape.BALL else "half_width")
        return cls(
            shape=shape,
            dim=int(dim),
            extent=None if extent is None else float(extent),
            height=float(data.get("height", 1.0)),
            file=file,
            box_lo=box_lo,
            box_hi=box_hi,
            cells=cells,
        )

    @classmethod
    def from_json(
        cls, source: Union[str, Path], default_dim: Optional[int] = None
    ) -> "FunctionDescriptor":
        """
        Parses inline JSON text (starting with ``{``) or a descriptor file path.
        """

        text = str(source).strip()
        base_dir = None
        if not text.startswith("{"):
            path = Path(text)
            try:
                text = path.read_text()
            except OSError as error:
                raise DescriptorError(f"Cannot read descriptor {path}: {error}")
            base_dir = path.parent
        try:
            data = json.loads(text)
        except json.JSONDecodeError as error:
            raise DescriptorError(f"Invalid descriptor JSON: {error}")
        if not isinstance(data, dict):
            raise DescriptorError("Descriptor JSON must be an object")
        return cls.from_dict(data, base_dir=base_dir, default_dim=default_dim)

    @property
    def is_separable(self) -> bool:
        return self.shape is Shape.CUBE

    @property
    def analytic_mass(self) -> Optional[float]:
        n, w, a = self.dim, self.extent, self.height
        if self.shape is Shape.CUBE:
            return (2 * w) ** n * a
        if self.shape is Shape.BALL:
            return a * math.pi ** (n / 2) / math.gamma(n / 2 + 1) * w ** n
        if self.shape is Shape.TENT:
            return a * w ** n
        return None

    @property
    def peak(self) -> Optional[float]:
        return None if self.shape is Shape.SAMPLES else self.height

    def profiles(self, variant: Variant = Variant.UNCENTERED) -> List[Profile1D]:
        """
        Returns the per-axis closed-form maximal profiles of a cube indicator;
        the height is carried by the first axis.
        """

        if not self.is_separable:
            raise DescriptorError(f"A {self.shape.value} is not a product shape")
        return [
            Profile1D(self.extent, self.height if axis == 0 else 1.0, variant)
            for axis in range(self.dim)
        ]

    def with_geometry(
        self,
        box_lo: Optional[Tuple[float, ...]] = None,
        box_hi: Optional[Tuple[float, ...]] = None,
        cells: Optional[Tuple[int, ...]] = None,
    ) -> "FunctionDescriptor":
        """
        Fills in any missing box or resolution. Values already present in the
        descriptor take precedence.
        """

        return replace(
            self,
            box_lo=self.box_lo if self.box_lo is not None else box_lo,
            box_hi=self.box_hi if self.box_hi is not None else box_hi,
            cells=self.cells if self.cells is not None else cells,
        )

    def with_box_half_width(self, half_width: float) -> "FunctionDescriptor":
        """Replaces the box with the centered cube [-half_width, half_width]^dim."""

        return replace(
            self,
            box_lo=(-half_width,) * self.dim,
            box_hi=(half_width,) * self.dim,
        )

    def default_geometry(self) -> "FunctionDescriptor":
        if self.shape is Shape.SAMPLES:
            return self
        half = DEFAULT_BOX_SCALE * self.extent
        return self.with_geometry(
            (-half,) * self.dim, (half,) * self.dim, (DEFAULT_RESOLUTION,) * self.dim
        )

    def to_dict(self) -> dict:
        data = {"shape": self.shape.value, "dim": self.dim}
        if self.shape is Shape.SAMPLES:
            data["file"] = self.file
        else:
            key = "radius" if self.shape is Shape.BALL else "half_width"
            data[key] = self.extent
            data["height"] = self.height
        for name in ("box_lo", "box_hi", "cells"):
            value = getattr(self, name)
            if value is not None:
                data[name] = list(value)
        return data


def _optional_tuple(value, kind) -> Optional[tuple]:
    if value is None:
        return None
    try:
        return tuple(kind(v) for v in value)
    except (TypeError, ValueError):
        raise DescriptorError(f"Expected a list of numbers, got {value!r}")


def build_grid_function(descriptor: FunctionDescriptor) -> GridFunction:
    """
    Samples the described function at cell centers.

    Parameters
    ----------
    descriptor : FunctionDescriptor
        Shape description; box and cells not given fall back to the defaults.

    Returns
    -------
    GridFunction
        Cell-centered samples. Indicator cells take the shape height when
        their center lies inside the (closed) shape, else 0.
    """

    descriptor = descriptor.default_geometry()
    if descriptor.shape is Shape.SAMPLES:
        return _load_samples(descriptor)

    sampled = GridFunction(
        descriptor.box_lo, descriptor.box_hi, np.zeros(descriptor.cells)
    )
    mesh = sampled.mesh()
    w, a = descriptor.extent, descriptor.height
    if descriptor.shape is Shape.CUBE:
        inside = np.ones(sampled.cells, dtype=bool)
        for coordinate in mesh:
            inside &= np.abs(coordinate) <= w
        values = np.where(inside, a, 0.0)
    elif descriptor.shape is Shape.BALL:
        squared = sum(coordinate ** 2 for coordinate in mesh)
        values = np.where(squared <= w ** 2, a, 0.0)
    else:
        values = np.full(sampled.cells, a)
        for coordinate in mesh:
            values = values * np.clip(1.0 - np.abs(coordinate) / w, 0.0, None)
    logger.debug("Sampled %s on %s cells", descriptor.shape.value, sampled.cells)
    return sampled.with_values(values)


def _load_samples(descriptor: FunctionDescriptor) -> GridFunction:
    try:
        raw = np.loadtxt(descriptor.file, delimiter=",", ndmin=1, dtype=np.float64)
    except (OSError, ValueError) as error:
        raise DescriptorError(f"Cannot read samples {descriptor.file}: {error}")
    flat = raw.ravel()
    expected = int(np.prod(descriptor.cells))
    if flat.size != expected:
        raise DescriptorError(
            f"Sample file holds {flat.size} values, cells {descriptor.cells} "
            f"need {expected}"
        )
    return GridFunction(
        descriptor.box_lo, descriptor.box_hi, flat.reshape(descriptor.cells)
    )
