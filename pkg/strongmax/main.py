import logging
from dataclasses import dataclass
from typing import Optional

from strongmax.utils.asymptotics import (
    Extrapolation,
    LimitScan,
    extrapolate_constant,
    limit_scan,
)
from strongmax.utils.certificates import Certificate, lower_bound_certificate
from strongmax.utils.descriptors import FunctionDescriptor
from strongmax.utils.distribution import DistributionCurve
from strongmax.utils.enums import Direction, Method, Variant
from strongmax.utils.grid import GridFunction
from strongmax.utils.sources_manager import DistributionSource, SourcesManager

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ScanSummary:
    scan: LimitScan
    target: float
    extrapolation: Optional[Extrapolation] = None

    @property
    def relative_gap(self) -> Optional[float]:
        if self.extrapolation is None:
            return None
        return self.extrapolation.relative_gap(self.target)

    def to_dict(self) -> dict:
        fit = self.extrapolation
        return {
            "n": self.scan.dim,
            "direction": self.scan.direction.value,
            "method": self.scan.method,
            "points": len(self.scan),
            "target": self.target,
            "extrapolated": None if fit is None else fit.constant,
            "residual": None if fit is None else fit.residual,
            "relative_gap": self.relative_gap,
            "max_weighted": float(self.scan.weighted.max()),
        }


class StrongMaximalStudy:
    """
    Runs the experiments for one test function (or a pair, for the bilinear
    operator): maximal fields, distribution curves, limit scans and
    certificates, sharing the distribution sources between them.
    """

    def __init__(
        self,
        descriptor: FunctionDescriptor,
        variant: Variant = Variant.UNCENTERED,
        g: Optional[FunctionDescriptor] = None,
        resolution: Optional[int] = None,
        literal: bool = False,
    ):
        self.descriptor = descriptor
        self.variant = variant
        self.literal = literal
        self.sources_manager = SourcesManager(
            descriptor, variant, g=g, resolution=resolution
        )

    @property
    def dim(self) -> int:
        return self.descriptor.dim

    @property
    def bilinear(self) -> bool:
        return self.sources_manager.g is not None

    def get_source(self, method: Optional[Method] = None) -> DistributionSource:
        return self.sources_manager.get_source(method)

    def maximal_field(self) -> GridFunction:
        """
        Returns the grid maximal function of the input (bilinear when a second
        function was given).
        """

        return self.get_source(Method.GRID).maximal

    def distribution(
        self, lambdas, method: Optional[Method] = None
    ) -> DistributionCurve:
        return self.get_source(method).curve(lambdas, literal=self.literal)

    def scan(
        self,
        lambdas,
        method: Optional[Method] = None,
        direction: Direction = Direction.TO_ZERO,
    ) -> ScanSummary:
        """
        Scans the weighted level-set measure toward a limit and, toward zero,
        extrapolates the limiting constant.

        Parameters
        ----------
        lambdas : array-like
            Levels to scan.
        method : Method, optional
            Distribution source, by default the best available.
        direction : Direction, optional
            Limit direction, by default TO_ZERO.

        Returns
        -------
        ScanSummary
            The scan, its target constant and the extrapolation (toward zero
            only).
        """

        source = self.get_source(method)
        target = source.target()
        scan = limit_scan(
            source,
            self.dim,
            lambdas,
            direction=direction,
            target=target,
            literal=self.literal,
        )
        extrapolation = None
        if direction is Direction.TO_ZERO:
            extrapolation = extrapolate_constant(scan)
            logger.info(
                "Extrapolated %.8g against target %.8g",
                extrapolation.constant,
                target,
            )
        return ScanSummary(scan=scan, target=target, extrapolation=extrapolation)

    def certify(self, lambdas, method: Optional[Method] = None) -> Certificate:
        return lower_bound_certificate(
            self.descriptor,
            self.dim,
            self.variant,
            lambdas,
            method=method,
            resolution=self.sources_manager.resolution,
            literal=self.literal,
        )
