import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from strongmax.utils.asymptotics import (
    far_field_measure,
    mixed_region_total,
    phi,
    weight,
)
from strongmax.utils.enums import Method, Variant
from strongmax.utils.exceptions import InvalidInputError, PreconditionError
from strongmax.utils.far_field import FarFieldConfig
from strongmax.utils.grid import GridFunction
from strongmax.utils.maximal import strong_maximal_grid
from strongmax.utils.profiles import Profile1D
from strongmax.utils.quadrature import integrate_piecewise

logger = logging.getLogger(__name__)

# keeps quadrature samples strictly inside the open level set
_EDGE_SHRINK = 1.0 - 1e-12
_MONOTONE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class DistributionCurve:
    """
    Level-set measures |{M > lambda}| at ascending levels.

    For bilinear curves ``measures[k]`` is the measure of
    {M(f, g) > lambdas[k]^2}. ``uncertainty``, when present, bounds the mass
    the estimator leaves out at each level.
    """

    dim: int
    lambdas: np.ndarray
    measures: np.ndarray
    methods: Tuple[str, ...]
    variant: Variant = Variant.UNCENTERED
    bilinear: bool = False
    uncertainty: Optional[np.ndarray] = None
    literal: bool = False

    def __post_init__(self):
        lambdas = np.asarray(self.lambdas, dtype=np.float64)
        measures = np.asarray(self.measures, dtype=np.float64)
        if lambdas.ndim != 1 or lambdas.size == 0:
            raise InvalidInputError("A curve needs at least one level")
        if measures.shape != lambdas.shape or len(self.methods) != lambdas.size:
            raise InvalidInputError("Levels, measures and methods differ in length")
        if np.any(~(lambdas > 0)) or np.any(np.diff(lambdas) <= 0):
            raise InvalidInputError("Levels must be positive and strictly ascending")
        if not np.all(np.isfinite(measures)) or np.any(measures < 0):
            raise InvalidInputError("Measures must be finite and >= 0")
        slack = _MONOTONE_TOLERANCE * np.maximum(measures[:-1], 1.0)
        if np.any(np.diff(measures) > slack):
            raise InvalidInputError("Measures must be nonincreasing in lambda")
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "measures", measures)
        object.__setattr__(self, "methods", tuple(self.methods))
        if self.uncertainty is not None:
            object.__setattr__(
                self, "uncertainty", np.asarray(self.uncertainty, dtype=np.float64)
            )

    @property
    def weighted(self) -> np.ndarray:
        weights = weight(self.dim, self.lambdas, literal=self.literal)
        return np.atleast_1d(weights) * self.measures

    def __len__(self) -> int:
        return self.lambdas.size


def _ascending(lambdas) -> np.ndarray:
    lambdas = np.unique(np.asarray(lambdas, dtype=np.float64))
    if lambdas.size == 0:
        raise InvalidInputError("Empty lambda grid")
    return lambdas


def phi_norm(f: GridFunction, n: int, literal: bool = False) -> float:
    """
    Returns the Orlicz norm ``sum phi_n(value) * cell_volume``.

    Parameters
    ----------
    f : GridFunction
        Sampled function.
    n : int
        Dimension parameter of phi.
    literal : bool, optional
        Literal n = 1 convention, by default False.

    Returns
    -------
    float
        The discrete integral of phi_n(f).
    """

    return float(np.sum(phi(n, f.values, literal=literal))) * f.cell_volume


def distribution_grid(
    m: GridFunction,
    lambdas,
    variant: Variant = Variant.UNCENTERED,
    bilinear: bool = False,
    literal: bool = False,
) -> DistributionCurve:
    """
    Counts the cells of a maximal-function grid above each level.

    Parameters
    ----------
    m : GridFunction
        Output of the maximal module.
    lambdas : array-like
        Positive levels.
    variant : Variant, optional
        Recorded on the curve.
    bilinear : bool, optional
        *m* is a bilinear maximal grid; cells are compared with lambda^2.
    literal : bool, optional
        Recorded on the curve.

    Returns
    -------
    DistributionCurve
        Cell count times cell volume per level.
    """

    lambdas = _ascending(lambdas)
    levels = lambdas ** 2 if bilinear else lambdas
    ordered = np.sort(m.flat_values)
    # cells with value > level
    counts = ordered.size - np.searchsorted(ordered, levels, side="right")
    return DistributionCurve(
        dim=m.dim,
        lambdas=lambdas,
        measures=counts * m.cell_volume,
        methods=(Method.GRID.value,) * lambdas.size,
        variant=variant,
        bilinear=bilinear,
        literal=literal,
    )


def distribution_separable(profiles: Sequence[Profile1D], lam: float) -> float:
    """
    Exact measure of {x : prod_k g_k(x_k) > lam} for per-axis maximal profiles.

    One dimension is the closed form ``2 * g^-1(lam)``; higher dimensions
    integrate the (n-1)-dimensional measure at level ``lam / g_1(x_1)`` over
    the bounded range of x_1 where that level is attainable.

    Parameters
    ----------
    profiles : Sequence[Profile1D]
        One profile per axis.
    lam : float
        Positive level; levels at or above the product of heights give 0.

    Returns
    -------
    float
        The level-set measure, up to quadrature tolerance.
    """

    if not profiles:
        raise InvalidInputError("Need at least one profile")
    if not lam > 0:
        raise InvalidInputError(f"Level must be positive: {lam}")
    head, rest = profiles[0], profiles[1:]
    if not rest:
        return 2.0 * head.level_half_width(lam)
    rest_peak = float(np.prod([p.height for p in rest]))
    extent = head.level_half_width(lam / rest_peak)
    if extent == 0.0:
        return 0.0

    def _slice_measure(x: float) -> float:
        return distribution_separable(rest, lam / head(x))

    half = integrate_piecewise(
        _slice_measure, 0.0, extent * _EDGE_SHRINK, breakpoints=(head.half_width,)
    )
    return 2.0 * half


def distribution_hybrid(
    f: GridFunction,
    cfg: FarFieldConfig,
    lambdas,
    maximal: Optional[GridFunction] = None,
) -> DistributionCurve:
    """
    Stitches the grid count inside [-R, R]^n to the exact far-field tail.

    The mixed regions (some coordinates near, some far) are not counted;
    their bound is attached as the per-level uncertainty.

    Parameters
    ----------
    f : GridFunction
        Function sampled on the box [-R, R]^n of *cfg*.
    cfg : FarFieldConfig
        Far-field parameters of *f*.
    lambdas : array-like
        Positive levels.
    maximal : GridFunction, optional
        Precomputed uncentered maximal grid of *f*.

    Returns
    -------
    DistributionCurve
        Hybrid measures tagged "hybrid".
    """

    if f.dim != cfg.dim:
        raise InvalidInputError(
            f"Grid dimension {f.dim} != far-field dimension {cfg.dim}"
        )
    R = cfg.radius
    tolerance = 1e-9 * R
    if not (
        np.allclose(f.box_lo, -R, rtol=0, atol=tolerance)
        and np.allclose(f.box_hi, R, rtol=0, atol=tolerance)
    ):
        raise PreconditionError(f"Hybrid grid must cover [-R, R]^n with R = {R!r}")
    if maximal is None:
        maximal = strong_maximal_grid(f, Variant.UNCENTERED)
    inner = distribution_grid(maximal, lambdas)
    tail = np.array([far_field_measure(cfg, lam) for lam in inner.lambdas])
    uncertainty = np.array([mixed_region_total(cfg, lam) for lam in inner.lambdas])
    logger.debug("Hybrid curve over %d levels (R = %g)", len(inner), R)
    return DistributionCurve(
        dim=f.dim,
        lambdas=inner.lambdas,
        measures=inner.measures + tail,
        methods=(Method.HYBRID.value,) * len(inner),
        variant=Variant.UNCENTERED,
        uncertainty=uncertainty,
    )


def weak_phi_norm(curve: DistributionCurve) -> Tuple[float, float]:
    """
    Returns the largest ``weight(n, lambda) * measure`` over the curve and
    the level where it is attained. Being a maximum over finitely many
    levels it is a lower bound on the weak quasi-norm.
    """

    weighted = curve.weighted
    index = int(np.argmax(weighted))
    return float(weighted[index]), float(curve.lambdas[index])
