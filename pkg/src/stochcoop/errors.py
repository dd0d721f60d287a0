"""Exception types raised across the package."""


class StochcoopError(Exception):
    """Base class for all package errors."""


class InvalidParameters(StochcoopError, ValueError):
    pass


class FamilyMismatch(StochcoopError, ValueError):
    pass


class AlphaMismatch(StochcoopError, ValueError):
    pass


class LengthMismatch(StochcoopError, ValueError):
    pass


class UnsupportedFamily(StochcoopError, ValueError):
    pass


class NonScaleFamily(StochcoopError, ValueError):
    pass


class NegativeScale(StochcoopError, ValueError):
    pass


class DimensionMismatch(StochcoopError, ValueError):
    pass


class EmptyCore(StochcoopError):
    pass


class Unbounded(StochcoopError):
    pass


class IncompatibleAllocationType(StochcoopError, ValueError):
    pass


class ZeroGrandVariance(StochcoopError, ValueError):
    pass


class InvalidGap(StochcoopError, ValueError):
    pass


class NotConvex(StochcoopError, ValueError):
    pass


class IterationCapExceeded(StochcoopError, RuntimeError):
    pass


class NotSymmetric(StochcoopError, ValueError):
    pass


class LpNumericalError(StochcoopError, RuntimeError):
    """A solver witness failed re-verification against its own constraints."""
