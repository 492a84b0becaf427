class StrongMaxError(Exception):
    """Base class for all errors raised by strongmax."""


class InvalidInputError(StrongMaxError, ValueError):
    pass


class DescriptorError(InvalidInputError):
    pass


class GridMismatchError(InvalidInputError):
    pass


class PreconditionError(InvalidInputError):
    pass


class GridTooLargeError(InvalidInputError):
    pass


class DegenerateFitError(StrongMaxError):
    pass


class ScanError(StrongMaxError):
    pass
