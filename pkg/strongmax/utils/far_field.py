import logging
from dataclasses import dataclass

import numpy as np

from strongmax.utils.exceptions import InvalidInputError, PreconditionError
from strongmax.utils.grid import GridFunction

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FarFieldConfig:
    """
    Parameters of the far-field corner rule for a function supported in
    [-r, r]^n with floor <= f <= ceiling on that cube.

    ``exact`` is False when the floor had to be replaced by the smallest
    positive value, in which case far-field values are an asymptotic
    approximation rather than exact.
    """

    dim: int
    half_width: float
    floor: float
    ceiling: float
    mass: float
    exact: bool = True

    def __post_init__(self):
        if self.dim < 1:
            raise InvalidInputError(f"Dimension must be positive: {self.dim}")
        if not self.half_width > 0:
            raise InvalidInputError(f"Half-width must be positive: {self.half_width}")
        if not 0 < self.floor <= self.ceiling:
            raise InvalidInputError(
                f"Need 0 < floor <= ceiling, got {self.floor}, {self.ceiling}"
            )
        if not self.mass > 0:
            raise InvalidInputError(f"Mass must be positive: {self.mass}")

    @property
    def radius(self) -> float:
        n, r = self.dim, self.half_width
        return (2 * r) ** (n + 1) * self.ceiling / self.floor + r

    @property
    def shift(self) -> float:
        return self.radius + self.half_width

    @property
    def tail_threshold(self) -> float:
        """Far-field values stay below this level."""

        return self.mass / self.shift ** self.dim

    @classmethod
    def for_cube(cls, dim: int, half_width: float, height: float) -> "FarFieldConfig":
        return cls(
            dim=dim,
            half_width=half_width,
            floor=height,
            ceiling=height,
            mass=(2 * half_width) ** dim * height,
        )

    @classmethod
    def from_grid(
        cls, f: GridFunction, allow_zero_floor: bool = False
    ) -> "FarFieldConfig":
        """
        Derives the configuration from a sampled function.

        Parameters
        ----------
        f : GridFunction
            The sampled function.
        allow_zero_floor : bool, optional
            Accept zeros inside the supporting cube by falling back to the
            smallest positive value, by default False.

        Returns
        -------
        FarFieldConfig
            Configuration with ``exact`` set accordingly.
        """

        positive = f.values > 0
        if not positive.any():
            raise InvalidInputError(
                "Far-field rule needs a function with positive mass"
            )
        half_width = 0.0
        for axis in range(f.dim):
            other = tuple(k for k in range(f.dim) if k != axis)
            occupied = np.flatnonzero(positive.any(axis=other) if other else positive)
            edges = f.edges(axis)
            half_width = max(
                half_width,
                abs(edges[occupied[0]]),
                abs(edges[occupied[-1] + 1]),
            )
        inside = np.ones(f.cells, dtype=bool)
        for axis, center in enumerate(f.mesh()):
            inside &= np.abs(center) < half_width
        floor = float(f.values[inside].min())
        exact = True
        if floor <= 0:
            if not allow_zero_floor:
                raise PreconditionError(
                    "Far-field rule needs f >= floor > 0 on its supporting cube"
                )
            floor = float(f.values[positive].min())
            exact = False
            logger.info("Zero floor replaced by %g; far field is approximate", floor)
        return cls(
            dim=f.dim,
            half_width=half_width,
            floor=floor,
            ceiling=float(f.values.max()),
            mass=f.mass,
            exact=exact,
        )


def far_field_value(cfg: FarFieldConfig, x) -> float:
    """
    Evaluates the corner rule ``mass / prod(|x_k| + r)`` at a point whose
    coordinates all exceed the far-field radius in absolute value.
    """

    point = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if point.shape != (cfg.dim,):
        raise InvalidInputError(f"Expected a point in dimension {cfg.dim}")
    if np.any(np.abs(point) <= cfg.radius):
        raise PreconditionError(
            f"Point {tuple(point)} is not in the far field |x_k| > R = {cfg.radius}"
        )
    return cfg.mass / float(np.prod(np.abs(point) + cfg.half_width))
