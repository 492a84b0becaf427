from enum import Enum


class Variant(Enum):
    UNCENTERED = "uncentered"
    CENTERED = "centered"


class Method(Enum):
    GRID = "grid"
    SEPARABLE = "separable"
    HYBRID = "hybrid"
    ANALYTIC = "analytic"


class Direction(Enum):
    TO_ZERO = "zero"
    TO_INFINITY = "infinity"


class Shape(Enum):
    CUBE = "cube"
    BALL = "ball"
    TENT = "tent"
    SAMPLES = "samples"
