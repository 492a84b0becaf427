import functools
import itertools
import logging
import operator
from typing import Sequence, Tuple

import numpy as np

from strongmax.utils.enums import Variant
from strongmax.utils.grid import GridFunction, summed_area
from strongmax.utils.profiles import Profile1D

logger = logging.getLogger(__name__)


def _along(axis: int, selection) -> tuple:
    return (slice(None),) * axis + (selection,)


def _sweep(tables: Tuple[np.ndarray, ...], ndim: int) -> np.ndarray:
    """
    Maximum, over grid-aligned rectangles containing each cell, of the product
    of the rectangle averages read from *tables*.

    The trailing *ndim* axes of every table are summed-area axes (length
    cells + 1); leading axes are batch axes. The first grid axis is handled by
    fixing the rectangle's lower edge, turning the table into slab averages for
    every upper edge at once, recursing on the remaining axes, and finally
    spreading each slab maximum to the cells it covers with a suffix maximum
    over upper edges.
    """

    if ndim == 0:
        return functools.reduce(operator.mul, tables)
    axis = tables[0].ndim - ndim
    size = tables[0].shape[axis] - 1
    out = None
    for start in range(size):
        lengths = np.arange(1, size - start + 1, dtype=np.float64)
        lengths = lengths.reshape((-1,) + (1,) * (ndim - 1))
        lower = _along(axis, slice(start, start + 1))
        upper = _along(axis, slice(start + 1, None))
        slabs = tuple((t[upper] - t[lower]) / lengths for t in tables)
        inner = _sweep(slabs, ndim - 1)
        # entry j now covers every slab [start, b) with b > start + j
        inner = np.flip(np.maximum.accumulate(np.flip(inner, axis), axis=axis), axis)
        if out is None:
            shape = list(inner.shape)
            shape[axis] = size
            out = np.zeros(shape, dtype=np.float64)
        target = out[_along(axis, slice(start, None))]
        np.maximum(target, inner, out=target)
    return out


def _centered_sums(table: np.ndarray, halves: Sequence[int], cells: Sequence[int]):
    """
    Sums over the index-symmetric boxes of half-widths *halves* around every
    cell, via the 2^dim corner combination. Corners are clamped to the table,
    so the part of a box outside the grid contributes zero.
    """

    dim = len(cells)
    lows = [np.clip(np.arange(c) - t, 0, c) for t, c in zip(halves, cells)]
    highs = [np.clip(np.arange(c) + t + 1, 0, c) for t, c in zip(halves, cells)]
    total = 0.0
    for bits in itertools.product((0, 1), repeat=dim):
        corner = np.ix_(*(hi if bit else lo for bit, lo, hi in zip(bits, lows, highs)))
        sign = -1.0 if (dim - sum(bits)) % 2 else 1.0
        total = total + sign * table[corner]
    return total


def _centered(f: GridFunction) -> np.ndarray:
    table = summed_area(f).table
    out = np.zeros(f.cells, dtype=np.float64)
    # beyond c - 1 cells a box only gains zeros
    for halves in itertools.product(*(range(c) for c in f.cells)):
        count = float(np.prod([2 * t + 1 for t in halves]))
        np.maximum(out, _centered_sums(table, halves, f.cells) / count, out=out)
    return out


def strong_maximal_grid(
    f: GridFunction, variant: Variant = Variant.UNCENTERED
) -> GridFunction:
    """
    Evaluates the strong maximal function of a grid function at every cell.

    Parameters
    ----------
    f : GridFunction
        Nonnegative samples.
    variant : Variant, optional
        Uncentered: all grid-aligned rectangles containing the cell.
        Centered: rectangles with odd cell spans centered on the cell; the
        part outside the box counts as zero.

    Returns
    -------
    GridFunction
        Maximal function on the same grid; never below *f*.
    """

    logger.debug("Strong maximal (%s) on %s cells", variant.value, f.cells)
    if variant is Variant.CENTERED:
        values = _centered(f)
    else:
        values = _sweep((summed_area(f).table,), f.dim)
    return f.with_values(np.maximum(values, f.values))


def bilinear_maximal_grid(f: GridFunction, g: GridFunction) -> GridFunction:
    """
    Evaluates the bilinear strong maximal function: the largest product of the
    averages of *f* and *g* over one common rectangle containing the cell.
    """

    f.check_same_geometry(g)
    logger.debug("Bilinear strong maximal on %s cells", f.cells)
    values = _sweep((summed_area(f).table, summed_area(g).table), f.dim)
    return f.with_values(np.maximum(values, f.values * g.values))


def separable_discrepancy(f: GridFunction, profiles: Sequence[Profile1D]) -> float:
    """
    Largest gap, over cell centers, between the grid maximal function of *f*
    and the exact separable value for the given per-axis profiles.
    """

    variant = profiles[0].variant
    grid_values = strong_maximal_grid(f, variant).values
    exact = functools.reduce(
        np.multiply.outer, (p(f.centers(axis)) for axis, p in enumerate(profiles))
    )
    return float(np.max(np.abs(grid_values - exact)))
