"""
Slow, independent reference implementations: Monte Carlo volumes for the
hyperbolic regions and exhaustive rectangle enumeration for the maximal
operators.
"""
import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, Tuple

import numpy as np

from strongmax.utils.defaults import (
    BRUTE_FORCE_MAX_CELLS,
    MC_CHUNK_SIZE,
    MC_MIN_SAMPLES,
)
from strongmax.utils.enums import Variant
from strongmax.utils.exceptions import (
    GridTooLargeError,
    InvalidInputError,
    PreconditionError,
)
from strongmax.utils.grid import GridFunction
from strongmax.utils.maximal import bilinear_maximal_grid, strong_maximal_grid
from strongmax.utils.workers import parallel_map

logger = logging.getLogger(__name__)

EQUIVALENCE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class McEstimate:
    estimate: float
    stderr: float
    samples: int
    seed: int

    def within(self, value: float, sigmas: float = 3.0) -> bool:
        return abs(self.estimate - value) <= sigmas * self.stderr


def _chunk_sizes(samples: int):
    full, rest = divmod(samples, MC_CHUNK_SIZE)
    return [MC_CHUNK_SIZE] * full + ([rest] if rest else [])


def mc_volume(
    n: int,
    R: float,
    r: float,
    c: float,
    samples: int = MC_MIN_SAMPLES,
    seed: int = 0,
) -> McEstimate:
    """
    Estimates |{x : x_k > R, prod (x_k + r) < c}| by rejection sampling.

    Parameters
    ----------
    n : int
        Dimension.
    R, r : float
        Region parameters, both positive.
    c : float
        Product bound, c > (R + r)^n.
    samples : int, optional
        Sample count, at least MC_MIN_SAMPLES.
    seed : int, optional
        Root seed; chunk generators are spawned from it, so the estimate is
        the same for any number of worker threads.

    Returns
    -------
    McEstimate
        Hit fraction times the volume of the box (R, c/(R+r)^(n-1) - r]^n.
    """

    if n < 1:
        raise InvalidInputError(f"Dimension must be positive: {n}")
    if not (R > 0 and r > 0):
        raise InvalidInputError(f"Need R > 0 and r > 0, got R={R}, r={r}")
    if samples < MC_MIN_SAMPLES:
        raise InvalidInputError(f"Need at least {MC_MIN_SAMPLES} samples: {samples}")
    s = R + r
    if not c > s ** n:
        raise PreconditionError(f"Need c > (R+r)^n = {s ** n!r}, got c = {c!r}")
    width = c / s ** (n - 1) - s
    sizes = _chunk_sizes(samples)
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def _hits(job) -> int:
        child, size = job
        rng = np.random.Generator(np.random.Philox(child))
        points = R + width * rng.random((size, n))
        return int(np.count_nonzero(np.prod(points + r, axis=1) < c))

    hits = sum(parallel_map(_hits, zip(children, sizes)))
    volume = width ** n
    p = hits / samples
    # sample variance of the hit indicator
    variance = p * (1 - p) * samples / (samples - 1)
    stderr = volume * math.sqrt(variance / samples)
    logger.debug("MC volume: %d/%d hits in box of volume %g", hits, samples, volume)
    return McEstimate(estimate=p * volume, stderr=stderr, samples=samples, seed=seed)


def _check_size(f: GridFunction):
    if f.values.size > BRUTE_FORCE_MAX_CELLS:
        raise GridTooLargeError(
            f"Brute force is limited to {BRUTE_FORCE_MAX_CELLS} cells, "
            f"got {f.values.size}"
        )


def _rectangles(cells) -> Iterator[Tuple[slice, ...]]:
    ranges = [
        [slice(lo, hi) for lo in range(c) for hi in range(lo + 1, c + 1)]
        for c in cells
    ]
    return itertools.product(*ranges)


def brute_force_maximal(
    f: GridFunction, variant: Variant = Variant.UNCENTERED
) -> GridFunction:
    """
    Evaluates the strong maximal function by enumerating every admissible
    rectangle and averaging it directly. Centered boxes may overhang the grid;
    the overhang counts as zero.
    """

    _check_size(f)
    values = f.values
    out = values.copy()
    if variant is Variant.CENTERED:
        for index in np.ndindex(*f.cells):
            best = out[index]
            for halves in itertools.product(*(range(c) for c in f.cells)):
                box = tuple(
                    slice(max(i - t, 0), i + t + 1) for i, t in zip(index, halves)
                )
                count = math.prod(2 * t + 1 for t in halves)
                best = max(best, float(np.sum(values[box])) / count)
            out[index] = best
    else:
        for box in _rectangles(f.cells):
            np.maximum(out[box], float(np.mean(values[box])), out=out[box])
    return f.with_values(out)


def brute_force_bilinear(f: GridFunction, g: GridFunction) -> GridFunction:
    """Exhaustive bilinear maximal function: products of common-rectangle means."""

    f.check_same_geometry(g)
    _check_size(f)
    out = f.values * g.values
    for box in _rectangles(f.cells):
        product = float(np.mean(f.values[box])) * float(np.mean(g.values[box]))
        np.maximum(out[box], product, out=out[box])
    return f.with_values(out)


def _random_grid(rng: np.random.Generator) -> GridFunction:
    dim = int(rng.integers(1, 4))
    limit = {1: 64, 2: 12, 3: 6}[dim]
    cells = tuple(int(c) for c in rng.integers(1, limit + 1, size=dim))
    return GridFunction((0.0,) * dim, (1.0,) * dim, rng.random(cells))


def _matches(fast: GridFunction, slow: GridFunction) -> bool:
    return bool(
        np.allclose(fast.values, slow.values, rtol=EQUIVALENCE_TOLERANCE, atol=0)
    )


def equivalence_suite(trials: int, seed: int = 0) -> Tuple[int, int]:
    """
    Compares the fast grid evaluators with the brute-force ones on random
    grids: both variants of the linear operator and the bilinear operator
    per trial.

    Parameters
    ----------
    trials : int
        Number of random grids.
    seed : int, optional
        Seed of the grid generator.

    Returns
    -------
    Tuple[int, int]
        Passed and failed comparison counts.
    """

    if trials < 1:
        raise InvalidInputError(f"Need at least one trial: {trials}")
    rng = np.random.default_rng(seed)
    passed = failed = 0
    for trial in range(trials):
        f = _random_grid(rng)
        g = f.with_values(rng.random(f.cells))
        checks = [
            (strong_maximal_grid(f, v), brute_force_maximal(f, v)) for v in Variant
        ]
        checks.append((bilinear_maximal_grid(f, g), brute_force_bilinear(f, g)))
        for fast, slow in checks:
            if _matches(fast, slow):
                passed += 1
            else:
                failed += 1
                logger.warning("Trial %d: fast and brute force disagree", trial)
    logger.info("Equivalence suite: %d passed, %d failed", passed, failed)
    return passed, failed
