"""
Exact volume of the hyperbolic region

    {y in (s, inf)^n : y_1 * ... * y_n < c},     c > s^n,

as a log-polynomial ``sum_j beta_j * c * (log c)^j + (-1)^n * s^n``.

Each beta_j is a polynomial in ``L = log s`` with rational coefficients, built by
integrating out one coordinate at a time:

    V_1(c) = c - s
    V_n(c) = integral_s^{c / s^(n-1)} V_{n-1}(c / y) dy

using ``integral (c/y) log(c/y)^j dy = -c log(c/y)^(j+1) / (j+1)``.
"""
import logging
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

from strongmax.utils.exceptions import InvalidInputError, PreconditionError

logger = logging.getLogger(__name__)

# polynomial in L = log s: coefficient tuple indexed by the power of L
Polynomial = Tuple[Fraction, ...]


def _freeze(poly: Dict[int, Fraction]) -> Polynomial:
    degree = max((k for k, v in poly.items() if v != 0), default=0)
    return tuple(poly.get(k, Fraction(0)) for k in range(degree + 1))


def _evaluate(poly: Polynomial, log_shift: float) -> float:
    value = 0.0
    for coefficient in reversed(poly):
        value = value * log_shift + float(coefficient)
    return value


def _reduce_dimension(beta: Tuple[Polynomial, ...], dim: int) -> Tuple[Polynomial, ...]:
    """Coefficients of V_dim from those of V_(dim-1)."""

    new = [defaultdict(Fraction) for _ in range(dim)]
    for j, poly in enumerate(beta):
        scale = Fraction(1, j + 1)
        # upper limit: (log c - L)^(j+1), expanded binomially
        for m in range(j + 2):
            factor = scale * math.comb(j + 1, m) * (-1) ** (j + 1 - m)
            for k, coefficient in enumerate(poly):
                new[m][k + j + 1 - m] += factor * coefficient
        # lower limit: ((dim - 1) L)^(j+1)
        factor = -scale * (dim - 1) ** (j + 1)
        for k, coefficient in enumerate(poly):
            new[0][k + j + 1] += factor * coefficient
    # constant term of V_(dim-1) integrated over (s, c / s^(dim-1))
    new[0][0] += (-1) ** (dim - 1)
    return tuple(_freeze(p) for p in new)


@lru_cache(maxsize=None)
def symbolic_coefficients(dim: int) -> Tuple[Polynomial, ...]:
    """
    Returns beta_0 .. beta_(dim-1) as exact polynomials in log s.

    Parameters
    ----------
    dim : int
        Dimension n >= 1.

    Returns
    -------
    Tuple[Polynomial, ...]
        ``result[j][k]`` is the rational coefficient of ``(log s)^k`` in beta_j.
    """

    if dim < 1:
        raise InvalidInputError(f"Dimension must be positive: {dim}")
    beta = ((Fraction(1),),)
    for current in range(2, dim + 1):
        beta = _reduce_dimension(beta, current)
    return beta


@dataclass(frozen=True)
class LogPolynomial:
    dim: int
    shift: float
    symbolic: Tuple[Polynomial, ...]

    @property
    def log_shift(self) -> float:
        return math.log(self.shift)

    @property
    def coefficients(self) -> Tuple[float, ...]:
        """beta_j evaluated at the shift."""

        return tuple(_evaluate(poly, self.log_shift) for poly in self.symbolic)

    @property
    def normalized(self) -> Tuple[Fraction, ...]:
        """
        Coefficients b_j of the scale-free form
        ``c * sum_j b_j (log c - n log s)^j + gamma``; they are the constant
        terms of the beta_j.
        """

        return tuple(poly[0] for poly in self.symbolic)

    @property
    def constant(self) -> float:
        return (-1) ** self.dim * self.shift ** self.dim

    @property
    def threshold(self) -> float:
        return self.shift ** self.dim

    def expansion(self, c: float) -> float:
        """Stable evaluation of the closed form, without clamping at c <= s^n."""

        d = math.log(c) - self.dim * self.log_shift
        inner = 0.0
        for b in reversed(self.normalized):
            inner = inner * d + float(b)
        return c * inner + self.constant

    def expanded_value(self, c: float) -> float:
        """Literal evaluation of ``sum_j beta_j c (log c)^j + gamma``."""

        log_c = math.log(c)
        return (
            sum(b * c * log_c ** j for j, b in enumerate(self.coefficients))
            + self.constant
        )

    def __call__(self, c: float) -> float:
        if c <= self.threshold:
            return 0.0
        return self.expansion(c)


def lemma21_polynomial(n: int, s: float) -> LogPolynomial:
    """
    Builds the log-polynomial volume of {y in (s, inf)^n : prod y_k < c}.

    Parameters
    ----------
    n : int
        Dimension, n >= 1.
    s : float
        Lower corner of the orthant, s > 0.

    Returns
    -------
    LogPolynomial
        Closed form in c; its top coefficient is exactly 1/(n-1)!.
    """

    if n < 1:
        raise InvalidInputError(f"Dimension must be positive: {n}")
    if not s > 0:
        raise InvalidInputError(f"Shift must be positive: {s}")
    return LogPolynomial(dim=n, shift=float(s), symbolic=symbolic_coefficients(n))


def lemma21_volume(n: int, R: float, r: float, c: float) -> float:
    """
    Volume of {x : x_1, ..., x_n > R, prod (x_k + r) < c} for c > (R + r)^n.
    """

    if not (R > 0 and r > 0):
        raise InvalidInputError(f"Need R > 0 and r > 0, got R={R}, r={r}")
    polynomial = lemma21_polynomial(n, R + r)
    if not c > polynomial.threshold:
        raise PreconditionError(
            f"Need c > (R+r)^n = {polynomial.threshold!r}, got c = {c!r}"
        )
    return polynomial(c)
