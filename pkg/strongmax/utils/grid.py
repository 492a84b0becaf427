import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from strongmax.utils.exceptions import GridMismatchError, InvalidInputError

logger = logging.getLogger(__name__)

MAX_DIMENSION = 3


@dataclass(frozen=True, eq=False)
class GridFunction:
    """
    A nonnegative function sampled at the cell centers of an axis-aligned box.

    Values are stored as a C-ordered (row-major) array whose shape is the
    per-axis cell count; the array is made read-only on construction.
    """

    box_lo: Tuple[float, ...]
    box_hi: Tuple[float, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64, order="C")
        box_lo = tuple(float(v) for v in self.box_lo)
        box_hi = tuple(float(v) for v in self.box_hi)
        if not 1 <= values.ndim <= MAX_DIMENSION:
            raise InvalidInputError(
                f"Grid dimension must be 1-{MAX_DIMENSION}, got {values.ndim}"
            )
        if len(box_lo) != values.ndim or len(box_hi) != values.ndim:
            raise InvalidInputError("Box corners must match the grid dimension")
        if any(c < 1 for c in values.shape):
            raise InvalidInputError(f"Cell counts must be positive: {values.shape}")
        if any(not hi > lo for lo, hi in zip(box_lo, box_hi)):
            raise InvalidInputError(f"Empty box: {box_lo} .. {box_hi}")
        if not np.all(np.isfinite(values)):
            raise InvalidInputError("Grid values must be finite")
        if np.any(values < 0):
            raise InvalidInputError("Grid values must be nonnegative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "box_lo", box_lo)
        object.__setattr__(self, "box_hi", box_hi)

    @property
    def dim(self) -> int:
        return self.values.ndim

    @property
    def cells(self) -> Tuple[int, ...]:
        return self.values.shape

    @property
    def spacing(self) -> Tuple[float, ...]:
        return tuple(
            (hi - lo) / c for lo, hi, c in zip(self.box_lo, self.box_hi, self.cells)
        )

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def total_volume(self) -> float:
        return float(np.prod([hi - lo for lo, hi in zip(self.box_lo, self.box_hi)]))

    @property
    def mass(self) -> float:
        return float(self.values.sum()) * self.cell_volume

    @property
    def flat_values(self) -> np.ndarray:
        return self.values.ravel()

    def centers(self, axis: int) -> np.ndarray:
        """
        Returns the cell-center coordinates along one axis.

        Parameters
        ----------
        axis : int
            Axis index, 0 <= axis < dim.

        Returns
        -------
        np.ndarray
            1D array of length cells[axis].
        """

        lo, step = self.box_lo[axis], self.spacing[axis]
        return lo + (np.arange(self.cells[axis]) + 0.5) * step

    def edges(self, axis: int) -> np.ndarray:
        lo, step = self.box_lo[axis], self.spacing[axis]
        return lo + np.arange(self.cells[axis] + 1) * step

    def mesh(self) -> List[np.ndarray]:
        return np.meshgrid(*(self.centers(k) for k in range(self.dim)), indexing="ij")

    def with_values(self, values: np.ndarray) -> "GridFunction":
        return GridFunction(self.box_lo, self.box_hi, values)

    def same_geometry(self, other: "GridFunction") -> bool:
        return (
            self.cells == other.cells
            and np.allclose(self.box_lo, other.box_lo, rtol=1e-12, atol=0)
            and np.allclose(self.box_hi, other.box_hi, rtol=1e-12, atol=0)
        )

    def check_same_geometry(self, other: "GridFunction"):
        if not self.same_geometry(other):
            raise GridMismatchError(
                "Grids must share box and resolution: "
                f"{self.cells} on {self.box_lo}..{self.box_hi} vs "
                f"{other.cells} on {other.box_lo}..{other.box_hi}"
            )


@dataclass(frozen=True)
class AxisRect:
    """Half-open per-axis cell-index intervals [lo[k], hi[k])."""

    lo: Tuple[int, ...]
    hi: Tuple[int, ...]

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise InvalidInputError("Rectangle corners differ in dimension")
        if any(not 0 <= a < b for a, b in zip(self.lo, self.hi)):
            raise InvalidInputError(f"Invalid rectangle {self.lo} .. {self.hi}")

    @classmethod
    def full(cls, cells: Sequence[int]) -> "AxisRect":
        return cls(tuple(0 for _ in cells), tuple(cells))

    @property
    def count(self) -> int:
        return int(np.prod([b - a for a, b in zip(self.lo, self.hi)]))

    def check_fits(self, cells: Sequence[int]):
        if len(cells) != len(self.lo) or any(
            b > c for b, c in zip(self.hi, cells)
        ):
            raise InvalidInputError(
                f"Rectangle {self.lo}..{self.hi} exceeds grid cells {tuple(cells)}"
            )


@dataclass(frozen=True, eq=False)
class SummedArea:
    """
    Cumulative sums of a GridFunction, padded with a leading zero plane on every
    axis: ``table[i]`` is the sum of all values with index < i componentwise.
    """

    table: np.ndarray
    grid: GridFunction = field(repr=False)

    @property
    def dim(self) -> int:
        return self.grid.dim

    def rect_sum(self, rect: AxisRect) -> float:
        rect.check_fits(self.grid.cells)
        total = 0.0
        for bits in itertools.product((0, 1), repeat=self.dim):
            corner = tuple(
                hi if bit else lo for bit, lo, hi in zip(bits, rect.lo, rect.hi)
            )
            sign = -1.0 if (self.dim - sum(bits)) % 2 else 1.0
            total += sign * self.table[corner]
        return float(total)


def summed_area(f: GridFunction) -> SummedArea:
    """
    Builds the summed-area table of a grid function.

    Parameters
    ----------
    f : GridFunction
        The sampled function.

    Returns
    -------
    SummedArea
        Table of shape ``cells + 1`` on every axis.
    """

    table = np.zeros(tuple(c + 1 for c in f.cells), dtype=np.float64)
    cumulative = f.values
    for axis in range(f.dim):
        cumulative = np.cumsum(cumulative, axis=axis)
    table[tuple(slice(1, None) for _ in range(f.dim))] = cumulative
    table.setflags(write=False)
    return SummedArea(table=table, grid=f)


def rect_average(s: SummedArea, rect: AxisRect) -> float:
    """
    Returns the average of the sampled function over a grid-aligned rectangle,
    i.e. the mean of the covered cell values.
    """

    return s.rect_sum(rect) / rect.count
