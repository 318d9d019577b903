"""Exception hierarchy shared by every module of the package."""


class ProximityError(Exception):
    """Base class for all package errors."""


class InvalidValue(ProximityError, ValueError):
    pass


class ProbeDomainError(ProximityError):
    """A probe function is undefined at a point."""


class EmptyRegion(ProximityError, ValueError):
    pass


class SpaceMismatch(ProximityError, ValueError):
    """Regions from two different spaces were combined."""


class ProbeSetMismatch(ProximityError, ValueError):
    """Feature vectors or groupoids built from incompatible probe sets."""


class NotInCarrier(ProximityError, ValueError):
    pass


class UndefinedPair(ProximityError):
    """The partial operation is not defined on the given ordered pair."""


class NoPatterns(ProximityError, ValueError):
    pass


class ImageIOError(ProximityError, OSError):
    pass


class FormatError(ProximityError, ValueError):
    pass


class SpecError(ProximityError, ValueError):
    """Invalid tiling parameters (or a tile larger than the image)."""
