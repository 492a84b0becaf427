import logging
import math
from dataclasses import dataclass
from typing import Optional

from strongmax.utils.defaults import CERTIFICATE_FRACTION
from strongmax.utils.descriptors import FunctionDescriptor, build_grid_function
from strongmax.utils.distribution import phi_norm, weak_phi_norm
from strongmax.utils.enums import Method, Variant
from strongmax.utils.exceptions import InvalidInputError, PreconditionError
from strongmax.utils.sources_manager import SourcesManager

logger = logging.getLogger(__name__)


def certificate_target(n: int, variant: Variant) -> float:
    """
    Lower bound on the operator norm from L_Phi_n to the weak space:
    ``max(2^n / (n-1)!, 1)`` uncentered, 1 centered.
    """

    if variant is Variant.CENTERED:
        return 1.0
    return max(2 ** n / math.factorial(n - 1), 1.0)


@dataclass(frozen=True)
class Certificate:
    dim: int
    variant: Variant
    descriptor: dict
    achieved: float
    target: float
    level: float
    method: str
    norm: float
    fraction: float = CERTIFICATE_FRACTION

    def __post_init__(self):
        if not self.achieved >= 0:
            raise InvalidInputError(f"Achieved ratio must be >= 0: {self.achieved}")

    @property
    def passed(self) -> bool:
        return self.achieved >= self.fraction * self.target

    def to_dict(self) -> dict:
        return {
            "n": self.dim,
            "variant": self.variant.value,
            "function": self.descriptor,
            "achieved": self.achieved,
            "target": self.target,
            "lambda": self.level,
            "method": self.method,
            "phi_norm": self.norm,
            "fraction": self.fraction,
            "passed": self.passed,
        }


def lower_bound_certificate(
    descriptor: FunctionDescriptor,
    n: int,
    variant: Variant,
    lambdas,
    method: Optional[Method] = None,
    resolution: Optional[int] = None,
    literal: bool = False,
) -> Certificate:
    """
    Certifies a lower bound on the operator norm with one test function.

    Parameters
    ----------
    descriptor : FunctionDescriptor
        Test function with values <= 1, so its phi_n norm is its L1 norm.
    n : int
        Dimension; must match the descriptor.
    variant : Variant
        Operator variant.
    lambdas : array-like
        Levels at which the weak quasi-norm is sampled.
    method : Method, optional
        Distribution source; defaults to the best one for the descriptor.
    resolution : int, optional
        Cells per axis for grid-based methods.
    literal : bool, optional
        Literal n = 1 convention.

    Returns
    -------
    Certificate
        Achieved ratio ``sup weight * |E| / ||f||_Phi`` against the target.
    """

    if n != descriptor.dim:
        raise InvalidInputError(
            f"Dimension {n} does not match the descriptor dimension {descriptor.dim}"
        )
    manager = SourcesManager(descriptor, variant, resolution=resolution)
    method = method or manager.best_method()
    if descriptor.peak is None:
        peak = float(build_grid_function(descriptor).values.max())
    else:
        peak = descriptor.peak
    if peak > 1:
        raise PreconditionError(
            f"Certificates need height <= 1 so that the phi norm is the L1 norm, "
            f"got {peak!r}"
        )
    source = manager.get_source(method)
    curve = source.curve(lambdas, literal=literal)
    value, level = weak_phi_norm(curve)
    if method is Method.GRID:
        norm = phi_norm(source.function, n, literal=literal)
    else:
        # phi_n(t) = t on [0, 1]
        norm = source.mass
    certificate = Certificate(
        dim=n,
        variant=variant,
        descriptor=descriptor.to_dict(),
        achieved=value / norm,
        target=certificate_target(n, variant),
        level=level,
        method=method.value,
        norm=norm,
    )
    logger.info(
        "Certificate n=%d %s: %.6g of target %.6g at lambda=%g",
        n,
        variant.value,
        certificate.achieved,
        certificate.target,
        level,
    )
    return certificate
