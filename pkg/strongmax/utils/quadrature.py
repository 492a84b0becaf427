import logging
from typing import Callable, Iterable, Tuple

from strongmax.utils.defaults import QUADRATURE_MAX_DEPTH, QUADRATURE_TOLERANCE

logger = logging.getLogger(__name__)


def _simpson(fa: float, fm: float, fb: float, width: float) -> float:
    return width / 6.0 * (fa + 4.0 * fm + fb)


def integrate_adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = QUADRATURE_TOLERANCE,
    max_depth: int = QUADRATURE_MAX_DEPTH,
) -> Tuple[float, float]:
    """
    Adaptive Simpson integration of *f* over [a, b] by recursive bisection.

    Parameters
    ----------
    f : Callable[[float], float]
        Integrand, smooth on [a, b].
    a, b : float
        Integration limits, a <= b.
    rel_tol : float, optional
        Tolerance relative to the magnitude of the first Simpson estimate.
    max_depth : int, optional
        Bisection depth cap.

    Returns
    -------
    Tuple[float, float]
        Integral value and accumulated error estimate.
    """

    if b <= a:
        return 0.0, 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = _simpson(fa, fm, fb, b - a)
    tol = rel_tol * abs(whole) + 1e-300

    def _adaptive(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        flm, frm = f(0.5 * (a + m)), f(0.5 * (m + b))
        left = _simpson(fa, flm, fm, m - a)
        right = _simpson(fm, frm, fb, b - m)
        error = (left + right - whole) / 15.0
        if depth >= max_depth or abs(error) <= tol:
            return left + right + error, abs(error)
        half_tol, deeper = tol / 2, depth + 1
        left_value, left_error = _adaptive(a, m, fa, flm, fm, left, half_tol, deeper)
        right_value, right_error = _adaptive(m, b, fm, frm, fb, right, half_tol, deeper)
        return left_value + right_value, left_error + right_error

    return _adaptive(a, b, fa, fm, fb, whole, tol, 0)


def integrate_piecewise(
    f: Callable[[float], float],
    a: float,
    b: float,
    breakpoints: Iterable[float] = (),
    rel_tol: float = QUADRATURE_TOLERANCE,
    max_depth: int = QUADRATURE_MAX_DEPTH,
) -> float:
    """
    Integrates over [a, b] split first at the given breakpoints (kinks of the
    integrand) and then geometrically (doubling piece lengths) beyond the last
    breakpoint, so slowly decaying tails are resolved on every scale.
    """

    cuts = sorted({a, b, *(p for p in breakpoints if a < p < b)})
    pieces = list(zip(cuts[:-1], cuts[1:]))
    if len(cuts) > 2 and cuts[-2] > 0:
        start = cuts[-2]
        pieces.pop()
        while 2 * start < b:
            pieces.append((start, 2 * start))
            start *= 2
        pieces.append((start, b))
    total = 0.0
    for lo, hi in pieces:
        value, _ = integrate_adaptive_simpson(f, lo, hi, rel_tol, max_depth)
        total += value
    logger.debug("Integrated over %d pieces on [%g, %g]", len(pieces), a, b)
    return total
