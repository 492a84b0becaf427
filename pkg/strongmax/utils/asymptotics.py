import logging
import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from strongmax.utils.defaults import (
    DEFAULT_POINTS_PER_DECADE,
    MIN_EXTRAPOLATION_POINTS,
)
from strongmax.utils.enums import Direction, Variant
from strongmax.utils.exceptions import (
    DegenerateFitError,
    InvalidInputError,
    PreconditionError,
    ScanError,
)
from strongmax.utils.far_field import FarFieldConfig
from strongmax.utils.log_polynomial import lemma21_volume
from strongmax.utils.workers import parallel_map

logger = logging.getLogger(__name__)

Number = Union[float, np.ndarray]


def _log_power(x: np.ndarray, n: int, literal: bool) -> np.ndarray:
    """(log+ x)^(n-1) with the chosen n = 1 convention."""

    log_plus = np.log(np.maximum(x, 1.0))
    if n > 1:
        return log_plus ** (n - 1)
    if literal:
        # the power is 1 wherever log+ is positive
        return (log_plus > 0).astype(np.float64)
    return np.zeros_like(log_plus)


def _scalar_or_array(values: np.ndarray) -> Number:
    return float(values) if values.ndim == 0 else values


def phi(n: int, t: Number, literal: bool = False) -> Number:
    """
    The Orlicz function ``t * (1 + (log+ t)^(n-1))``.

    Parameters
    ----------
    n : int
        Dimension parameter, n >= 1.
    t : float or np.ndarray
        Nonnegative argument(s).
    literal : bool, optional
        For n = 1, use the literal reading (the power of log+ counts as 1
        wherever log+ t > 0, so phi = 2t for t > 1) instead of the classical
        phi = t, by default False.

    Returns
    -------
    float or np.ndarray
        Values with the shape of *t*.
    """

    if n < 1:
        raise InvalidInputError(f"Dimension must be positive: {n}")
    t = np.asarray(t, dtype=np.float64)
    if np.any(t < 0) or not np.all(np.isfinite(t)):
        raise InvalidInputError("phi is defined for finite t >= 0")
    values = t * (1.0 + _log_power(np.where(t > 0, t, 1.0), n, literal))
    return _scalar_or_array(values)


def weight(n: int, lam: Number, literal: bool = False) -> Number:
    """
    The weak-norm weight ``lambda / (1 + (log+ (1/lambda))^(n-1))``.
    For n = 1 the classical weight ``lambda`` is used unless *literal*.
    """

    if n < 1:
        raise InvalidInputError(f"Dimension must be positive: {n}")
    lam = np.asarray(lam, dtype=np.float64)
    if np.any(~(lam > 0)) or not np.all(np.isfinite(lam)):
        raise InvalidInputError("weight is defined for finite lambda > 0")
    values = lam / (1.0 + _log_power(1.0 / lam, n, literal))
    return _scalar_or_array(values)


def tail_level_measure(cfg: FarFieldConfig, lam: float) -> float:
    """
    Measure of the far-field level set, summed over the 2^n corner regions.

    Parameters
    ----------
    cfg : FarFieldConfig
        Far-field parameters of the function.
    lam : float
        Level, 0 < lam < mass / (R + r)^n.

    Returns
    -------
    float
        ``2^n * lemma21_volume(n, R, r, mass / lam)``.
    """

    if not 0 < lam < cfg.tail_threshold:
        raise PreconditionError(
            f"Need 0 < lambda < mass/(R+r)^n = {cfg.tail_threshold!r}, got {lam!r}"
        )
    return 2 ** cfg.dim * lemma21_volume(
        cfg.dim, cfg.radius, cfg.half_width, cfg.mass / lam
    )


def far_field_measure(cfg: FarFieldConfig, lam: float) -> float:
    """Like tail_level_measure, but 0 where the far-field level set is empty."""

    if not lam > 0:
        raise InvalidInputError(f"Level must be positive: {lam}")
    if lam >= cfg.tail_threshold:
        return 0.0
    return tail_level_measure(cfg, lam)


def _mixed_threshold(cfg: FarFieldConfig, i: int) -> float:
    k = cfg.dim - i
    return cfg.ceiling * (2 * cfg.half_width) ** k / cfg.shift ** k


def mixed_region_bound(cfg: FarFieldConfig, lam: float, i: int) -> float:
    """
    Upper bound on the level-set measure in the regions where exactly *i*
    coordinates satisfy |x_k| <= R.

    Parameters
    ----------
    cfg : FarFieldConfig
        Far-field parameters.
    lam : float
        Level below ``A (2r)^(n-i) / (R+r)^(n-i)``.
    i : int
        Number of near coordinates, 1 <= i <= n - 1.

    Returns
    -------
    float
        ``n! (2R)^i 2^(n-i) V_(n-i)(A (2r)^(n-i) / lam)``.
    """

    n = cfg.dim
    if not 1 <= i <= n - 1:
        raise InvalidInputError(f"Need 1 <= i <= n - 1 = {n - 1}, got i = {i}")
    threshold = _mixed_threshold(cfg, i)
    if not 0 < lam < threshold:
        raise PreconditionError(
            f"Need 0 < lambda < A(2r)^(n-i)/(R+r)^(n-i) = {threshold!r}, got {lam!r}"
        )
    k = n - i
    c = cfg.ceiling * (2 * cfg.half_width) ** k / lam
    return (
        math.factorial(n)
        * (2 * cfg.radius) ** i
        * 2 ** k
        * lemma21_volume(k, cfg.radius, cfg.half_width, c)
    )


def mixed_region_total(cfg: FarFieldConfig, lam: float) -> float:
    """Sum of the mixed-region bounds over every i whose region is nonempty."""

    return sum(
        mixed_region_bound(cfg, lam, i)
        for i in range(1, cfg.dim)
        if lam < _mixed_threshold(cfg, i)
    )


def geometric_lambdas(
    lambda_min: float,
    lambda_max: float,
    points_per_decade: int = DEFAULT_POINTS_PER_DECADE,
) -> np.ndarray:
    """
    Returns an ascending geometric grid from *lambda_min* to *lambda_max*,
    both included, with about *points_per_decade* points per factor of 10.
    """

    if not 0 < lambda_min < lambda_max:
        raise InvalidInputError(
            f"Need 0 < lambda_min < lambda_max, got {lambda_min}, {lambda_max}"
        )
    if points_per_decade < 1:
        raise InvalidInputError(
            f"Points per decade must be positive: {points_per_decade}"
        )
    decades = math.log10(lambda_max / lambda_min)
    count = max(2, int(math.ceil(points_per_decade * decades - 1e-9)) + 1)
    return np.geomspace(lambda_min, lambda_max, count)


def limit_target(
    n: int,
    variant: Variant,
    mass: float,
    g_mass: Optional[float] = None,
) -> float:
    """
    Limiting value of the weighted level-set measure as lambda -> 0.

    Uncentered: ``2^n / (n-1)! * mass``; centered: ``mass / (n-1)!``;
    bilinear (``g_mass`` given): ``2^n / (n-1)! * sqrt(mass * g_mass)``.
    """

    scale = 1.0 / math.factorial(n - 1)
    if g_mass is not None:
        return 2 ** n * scale * math.sqrt(mass * g_mass)
    if variant is Variant.CENTERED:
        return scale * mass
    return 2 ** n * scale * mass


@dataclass(frozen=True, eq=False)
class LimitScan:
    """
    Weighted level-set measures along a geometric lambda sequence, ordered in
    the direction of the limit.
    """

    dim: int
    direction: Direction
    lambdas: np.ndarray
    measures: np.ndarray
    weighted: np.ndarray
    target: Optional[float] = None
    method: str = ""
    literal: bool = False
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        lambdas = np.asarray(self.lambdas, dtype=np.float64)
        steps = np.diff(lambdas)
        if self.direction is Direction.TO_ZERO:
            monotone = np.all(steps < 0)
        else:
            monotone = np.all(steps > 0)
        if not monotone:
            raise InvalidInputError(
                f"Lambdas must move strictly toward {self.direction.value}"
            )
        weighted = np.asarray(self.weighted, dtype=np.float64)
        if not np.all(np.isfinite(weighted)) or np.any(weighted < 0):
            raise InvalidInputError("Weighted values must be finite and >= 0")
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "weighted", weighted)
        object.__setattr__(
            self, "measures", np.asarray(self.measures, dtype=np.float64)
        )

    @property
    def u(self) -> np.ndarray:
        """Extrapolation variable 1/log(1/lambda); NaN where lambda >= 1."""

        u = np.full(self.lambdas.shape, np.nan)
        small = self.lambdas < 1
        u[small] = 1.0 / np.log(1.0 / self.lambdas[small])
        return u

    def __len__(self) -> int:
        return len(self.lambdas)


def limit_scan(
    source,
    n: int,
    lambdas,
    direction: Direction = Direction.TO_ZERO,
    target: Optional[float] = None,
    literal: bool = False,
) -> LimitScan:
    """
    Evaluates ``weight(n, lambda) * |E_lambda|`` along a lambda sequence.

    Parameters
    ----------
    source : DistributionSource
        Anything exposing ``measure(lam)``; bilinear sources report the
        measure of {M(f, g) > lam^2}.
    n : int
        Dimension.
    lambdas : array-like
        Positive levels, in any order.
    direction : Direction, optional
        Limit direction; points are ordered toward it, by default TO_ZERO.
    target : float, optional
        Expected limit, recorded on the scan.
    literal : bool, optional
        Literal n = 1 weight convention, by default False.

    Returns
    -------
    LimitScan
        The scan, ordered toward the limit.
    """

    lambdas = np.unique(np.asarray(lambdas, dtype=np.float64))
    if lambdas.size == 0:
        raise InvalidInputError("Empty lambda grid")
    if direction is Direction.TO_ZERO:
        lambdas = lambdas[::-1]
    weights = np.atleast_1d(weight(n, lambdas, literal=literal))

    def _measure(lam: float) -> float:
        try:
            return float(source.measure(float(lam)))
        except InvalidInputError:
            raise
        except Exception as error:
            raise ScanError(f"Source failed at lambda = {lam!r}: {error}") from error

    measures = np.array(parallel_map(_measure, lambdas), dtype=np.float64)
    method = getattr(source, "method", None)
    logger.info(
        "Scanned %d lambdas toward %s (n=%d)", lambdas.size, direction.value, n
    )
    return LimitScan(
        dim=n,
        direction=direction,
        lambdas=lambdas,
        measures=measures,
        weighted=weights * measures,
        target=target,
        method=method.value if method is not None else "",
        literal=literal,
        provenance=dict(getattr(source, "provenance", {}) or {}),
    )


@dataclass(frozen=True)
class Extrapolation:
    constant: float
    residual: float
    points: int

    def relative_gap(self, target: float) -> float:
        return abs(self.constant - target) / abs(target)


def extrapolate_constant(scan: LimitScan) -> Extrapolation:
    """
    Fits ``W = C0 + C1 u + C2 u^2`` with ``u = 1/log(1/lambda)`` by unweighted
    least squares and returns C0 with the RMS fit residual.
    """

    if scan.direction is not Direction.TO_ZERO:
        raise InvalidInputError("Extrapolation needs a scan toward zero")
    if len(scan) < MIN_EXTRAPOLATION_POINTS:
        raise InvalidInputError(
            f"Extrapolation needs >= {MIN_EXTRAPOLATION_POINTS} points, "
            f"got {len(scan)}"
        )
    if np.any(scan.lambdas >= 1):
        raise InvalidInputError("Extrapolation needs every lambda < 1")
    design = np.vander(scan.u, 3, increasing=True)
    coefficients, _, rank, _ = np.linalg.lstsq(design, scan.weighted, rcond=None)
    if rank < 3:
        raise DegenerateFitError(f"Design matrix has rank {rank} < 3")
    residuals = scan.weighted - design @ coefficients
    rms = float(np.sqrt(np.mean(residuals ** 2)))
    logger.debug("Extrapolated %r (rms residual %g)", coefficients[0], rms)
    return Extrapolation(
        constant=float(coefficients[0]), residual=rms, points=len(scan)
    )
