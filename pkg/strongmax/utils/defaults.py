import logging
import os

logger = logging.getLogger(__name__)

DEFAULT_POINTS_PER_DECADE = 12
DEFAULT_RESOLUTION = 64
DEFAULT_BOX_SCALE = 4.0

QUADRATURE_TOLERANCE = 1e-8
QUADRATURE_MAX_DEPTH = 40

BRUTE_FORCE_MAX_CELLS = 10_000

HYBRID_MAX_CELLS = 1 << 16
HYBRID_MASS_TOLERANCE = 1e-3

MC_MIN_SAMPLES = 10_000
MC_CHUNK_SIZE = 1 << 18

CERTIFICATE_FRACTION = 0.95
MIN_EXTRAPOLATION_POINTS = 4

THREADS_VARIABLE = "STRONGMAX_THREADS"


def get_thread_count() -> int:
    """
    Returns the number of worker threads to use, honouring the
    STRONGMAX_THREADS environment variable when it holds a positive integer.

    Returns
    -------
    int
        Worker thread count (at least 1).
    """

    fallback = os.cpu_count() or 1
    raw = os.environ.get(THREADS_VARIABLE)
    if raw is None:
        return fallback
    try:
        count = int(raw)
    except ValueError:
        logger.warning("Ignoring non-integer %s=%r", THREADS_VARIABLE, raw)
        return fallback
    if count < 1:
        logger.warning("Ignoring non-positive %s=%r", THREADS_VARIABLE, raw)
        return fallback
    return count
