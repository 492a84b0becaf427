import logging
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from strongmax.utils.enums import Variant
from strongmax.utils.exceptions import InvalidInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Profile1D:
    """
    Closed-form one-dimensional maximal function of ``height * indicator[-r, r]``.

    Outside the support the uncentered value is ``a * 2r / (|x| + r)`` (the best
    interval runs from the far support edge to x); the centered value is
    ``a * r / (|x| + r)`` (the best interval is centered at x and just covers the
    support).
    """

    half_width: float
    height: float = 1.0
    variant: Variant = Variant.UNCENTERED

    def __post_init__(self):
        if not self.half_width > 0:
            raise InvalidInputError(f"Half-width must be positive: {self.half_width}")
        if not self.height > 0:
            raise InvalidInputError(f"Height must be positive: {self.height}")

    @property
    def spread(self) -> float:
        return 2.0 if self.variant is Variant.UNCENTERED else 1.0

    def __call__(self, x: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        distance = np.abs(np.asarray(x, dtype=np.float64))
        r, a = self.half_width, self.height
        values = np.where(distance < r, a, a * self.spread * r / (distance + r))
        if values.ndim == 0:
            return float(values)
        return values

    def level_half_width(self, level: float) -> float:
        """
        Returns the half-width of the open, symmetric set {x : profile(x) > level}.

        Parameters
        ----------
        level : float
            Threshold; nonpositive thresholds are not meaningful here.

        Returns
        -------
        float
            0 when level >= height, the set being empty.
        """

        if level <= 0:
            raise InvalidInputError(f"Level must be positive: {level}")
        r, a = self.half_width, self.height
        if level >= a:
            return 0.0
        return max(r, a * self.spread * r / level - r)


def separable_maximal(profiles: Sequence[Profile1D], x: Sequence[float]) -> float:
    """
    Evaluates the strong maximal function of a product of cube indicators at a
    point, as the product of the per-axis maximal functions.

    Parameters
    ----------
    profiles : Sequence[Profile1D]
        One profile per axis.
    x : Sequence[float]
        Evaluation point with one coordinate per profile.

    Returns
    -------
    float
        The exact continuous value.
    """

    point = np.atleast_1d(np.asarray(x, dtype=np.float64))
    if point.shape != (len(profiles),):
        raise InvalidInputError(
            f"Point of shape {point.shape} does not match {len(profiles)} profiles"
        )
    return float(np.prod([p(xk) for p, xk in zip(profiles, point)]))
