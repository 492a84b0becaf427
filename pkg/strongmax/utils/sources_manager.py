import logging
import math
from dataclasses import replace
from typing import Dict, Optional, Tuple

import numpy as np

from strongmax.utils.asymptotics import far_field_measure, limit_target
from strongmax.utils.defaults import (
    DEFAULT_BOX_SCALE,
    DEFAULT_RESOLUTION,
    HYBRID_MASS_TOLERANCE,
    HYBRID_MAX_CELLS,
)
from strongmax.utils.descriptors import FunctionDescriptor, build_grid_function
from strongmax.utils.distribution import (
    DistributionCurve,
    distribution_grid,
    distribution_hybrid,
    distribution_separable,
)
from strongmax.utils.enums import Method, Shape, Variant
from strongmax.utils.exceptions import (
    DescriptorError,
    InvalidInputError,
    PreconditionError,
)
from strongmax.utils.far_field import FarFieldConfig
from strongmax.utils.maximal import bilinear_maximal_grid, strong_maximal_grid
from strongmax.utils.workers import parallel_map

logger = logging.getLogger(__name__)


class DistributionSource:
    """
    Produces level-set measures |E_lambda| of the maximal function of a
    described input. Bilinear sources (``g`` given) report the measure of
    {M(f, g) > lambda^2}.
    """

    method: Method = None

    def __init__(
        self,
        descriptor: FunctionDescriptor,
        variant: Variant = Variant.UNCENTERED,
        g: Optional[FunctionDescriptor] = None,
        resolution: Optional[int] = None,
    ):
        if g is not None:
            if variant is not Variant.UNCENTERED:
                raise InvalidInputError("The bilinear operator is uncentered only")
            if g.dim != descriptor.dim:
                raise InvalidInputError(
                    f"Bilinear inputs differ in dimension: {descriptor.dim} vs {g.dim}"
                )
        self.descriptor = descriptor
        self.variant = variant
        self.g = g
        self.resolution = resolution

    @property
    def dim(self) -> int:
        return self.descriptor.dim

    @property
    def bilinear(self) -> bool:
        return self.g is not None

    @property
    def mass(self) -> float:
        return self.descriptor.analytic_mass

    @property
    def g_mass(self) -> Optional[float]:
        return None if self.g is None else self.g.analytic_mass

    @property
    def provenance(self) -> dict:
        data = {
            "method": self.method.value,
            "variant": self.variant.value,
            "function": self.descriptor.to_dict(),
        }
        if self.g is not None:
            data["g_function"] = self.g.to_dict()
        return data

    def target(self) -> float:
        return limit_target(self.dim, self.variant, self.mass, self.g_mass)

    def measure(self, lam: float) -> float:
        raise NotImplementedError

    def curve(self, lambdas, literal: bool = False) -> DistributionCurve:
        """
        Evaluates the source at every level.

        Parameters
        ----------
        lambdas : array-like
            Positive levels.
        literal : bool, optional
            Literal n = 1 convention, recorded on the curve.

        Returns
        -------
        DistributionCurve
            Measures at the ascending, de-duplicated levels.
        """

        lambdas = np.unique(np.asarray(lambdas, dtype=np.float64))
        measures = parallel_map(self.measure, lambdas)
        return DistributionCurve(
            dim=self.dim,
            lambdas=lambdas,
            measures=measures,
            methods=(self.method.value,) * lambdas.size,
            variant=self.variant,
            bilinear=self.bilinear,
            literal=literal,
        )

    def _grid_descriptor(self, descriptor: FunctionDescriptor) -> FunctionDescriptor:
        if self.resolution is None:
            return descriptor
        return replace(descriptor, cells=(self.resolution,) * descriptor.dim)


class GridSource(DistributionSource):
    method = Method.GRID

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        self.function = build_grid_function(self._grid_descriptor(self.descriptor))
        if self.g is None:
            self.maximal = strong_maximal_grid(self.function, self.variant)
        else:
            g_function = build_grid_function(self._grid_descriptor(self.g))
            self.maximal = bilinear_maximal_grid(self.function, g_function)
            self.g_function = g_function
        logger.info(
            "Grid source on %s cells (%s)", self.function.cells, self.variant.value
        )

    @property
    def mass(self) -> float:
        return self.function.mass

    @property
    def g_mass(self) -> Optional[float]:
        return None if self.g is None else self.g_function.mass

    def measure(self, lam: float) -> float:
        return float(self.curve([lam]).measures[0])

    def curve(self, lambdas, literal: bool = False) -> DistributionCurve:
        return distribution_grid(
            self.maximal,
            lambdas,
            variant=self.variant,
            bilinear=self.bilinear,
            literal=literal,
        )


class SeparableSource(DistributionSource):
    method = Method.SEPARABLE

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        if not self.descriptor.is_separable:
            raise DescriptorError(
                "The separable method needs a cube, got a "
                f"{self.descriptor.shape.value}"
            )
        self.profiles = self.descriptor.profiles(self.variant)
        self.scale = 1.0
        if self.g is not None:
            if not (
                self.g.is_separable
                and math.isclose(self.g.extent, self.descriptor.extent)
            ):
                raise DescriptorError(
                    "The separable bilinear method needs g to be a cube of the "
                    "same half-width as f"
                )
            # g = kappa * f, so M(f, g) = kappa (M f)^2
            self.scale = math.sqrt(self.g.height / self.descriptor.height)

    def measure(self, lam: float) -> float:
        return distribution_separable(self.profiles, lam / self.scale)


def _far_field_config(descriptor: FunctionDescriptor) -> FarFieldConfig:
    if descriptor.shape is Shape.CUBE:
        return FarFieldConfig.for_cube(
            descriptor.dim, descriptor.extent, descriptor.height
        )
    return FarFieldConfig.from_grid(
        build_grid_function(descriptor), allow_zero_floor=True
    )


class HybridSource(DistributionSource):
    method = Method.HYBRID

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        if self.variant is not Variant.UNCENTERED or self.g is not None:
            raise InvalidInputError(
                "The hybrid method supports the linear uncentered operator only"
            )
        if self.descriptor.shape is Shape.SAMPLES:
            raise DescriptorError("The hybrid method needs an analytic shape")
        self.config = _far_field_config(self.descriptor)
        # the far-field rule needs the grid box to be exactly [-R, R]^n
        boxed = self.descriptor.with_box_half_width(self.config.radius)
        boxed = replace(boxed, cells=self._cells())
        self.function = build_grid_function(boxed)
        if not math.isclose(
            self.function.mass, self.config.mass, rel_tol=HYBRID_MASS_TOLERANCE
        ):
            raise PreconditionError(
                f"Hybrid grid on {self.function.cells} cells holds mass "
                f"{self.function.mass:g}, expected {self.config.mass:g}; "
                "use a finer resolution"
            )
        self.maximal = strong_maximal_grid(self.function, Variant.UNCENTERED)
        logger.info(
            "Hybrid source: R = %g on %s cells (exact far field: %s)",
            self.config.radius,
            self.function.cells,
            self.config.exact,
        )

    def _cells(self) -> Tuple[int, ...]:
        """
        Cells per axis of the [-R, R]^n grid: the requested resolution, or
        else as many as keep the cell width at the shape's default width.
        """

        dim = self.dim
        if self.resolution is not None:
            return (self.resolution,) * dim
        width = 2 * DEFAULT_BOX_SCALE * self.descriptor.extent / DEFAULT_RESOLUTION
        per_axis = max(
            DEFAULT_RESOLUTION, math.ceil(2 * self.config.radius / width - 1e-9)
        )
        if per_axis ** dim > HYBRID_MAX_CELLS:
            raise PreconditionError(
                f"Hybrid grid would need {per_axis}^{dim} cells for "
                f"R = {self.config.radius:g} (limit {HYBRID_MAX_CELLS})"
            )
        return (per_axis,) * dim

    @property
    def mass(self) -> float:
        return self.config.mass

    def measure(self, lam: float) -> float:
        return float(self.curve([lam]).measures[0])

    def curve(self, lambdas, literal: bool = False) -> DistributionCurve:
        curve = distribution_hybrid(
            self.function, self.config, lambdas, maximal=self.maximal
        )
        return replace(curve, literal=literal)


class AnalyticSource(DistributionSource):
    """The exact far-field tail alone; it omits everything within R."""

    method = Method.ANALYTIC

    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        if self.variant is not Variant.UNCENTERED or self.g is not None:
            raise InvalidInputError(
                "The analytic method supports the linear uncentered operator only"
            )
        self.config = _far_field_config(self.descriptor)

    @property
    def mass(self) -> float:
        return self.config.mass

    def measure(self, lam: float) -> float:
        return far_field_measure(self.config, lam)


SOURCE_CLASSES = {
    Method.GRID: GridSource,
    Method.SEPARABLE: SeparableSource,
    Method.HYBRID: HybridSource,
    Method.ANALYTIC: AnalyticSource,
}


class SourcesManager:
    def __init__(
        self,
        descriptor: FunctionDescriptor,
        variant: Variant = Variant.UNCENTERED,
        g: Optional[FunctionDescriptor] = None,
        resolution: Optional[int] = None,
    ):
        self.descriptor = descriptor
        self.variant = variant
        self.g = g
        self.resolution = resolution
        self.sources: Dict[Method, DistributionSource] = {}

    def best_method(self) -> Method:
        """
        Returns the most accurate method available for the descriptor(s).

        Returns
        -------
        Method
            Separable for cubes (and same-width cube pairs), grid otherwise.
        """

        if self.descriptor.is_separable and (
            self.g is None
            or (
                self.g.is_separable
                and math.isclose(self.g.extent, self.descriptor.extent)
            )
        ):
            return Method.SEPARABLE
        return Method.GRID

    def create_source(self, method: Method) -> DistributionSource:
        source_class = SOURCE_CLASSES[method]
        return source_class(
            self.descriptor, self.variant, g=self.g, resolution=self.resolution
        )

    def get_source(self, method: Optional[Method] = None) -> DistributionSource:
        """
        Returns the (cached) source for *method*, defaulting to the best one.
        """

        method = method or self.best_method()
        if method not in self.sources:
            self.sources[method] = self.create_source(method)
        return self.sources[method]
