"""Exception types shared across basinlab."""


class BasinLabError(Exception):
    """Base class for all basinlab errors."""


class InvalidPermutation(BasinLabError):
    """Label permutation is not a bijection on 0..num_labels-1."""


class NumericalBlowup(BasinLabError):
    """Integration step produced a non-finite state."""


class RootFindingFailed(BasinLabError):
    """Polynomial root iteration did not meet the residual tolerance."""


class ForbiddenRegion(BasinLabError):
    """Launch point has potential energy at or above the total energy."""


class UndefinedTangent(BasinLabError):
    """Tangential shooting is undefined at the origin."""


class BoxTooLarge(BasinLabError):
    """Sampling box does not fit inside the grid."""


class NoBoundaryDetected(BasinLabError):
    """Grid has no boundary, or no uncertain box was found at any size."""


class InsufficientScaling(BasinLabError):
    """Fewer than two box sizes produced a nonzero uncertain fraction."""


class NoBoundarySampled(BasinLabError):
    """No sampled box contained more than one label."""


class LabelNotFound(BasinLabError):
    """Requested label is not present in the grid."""


class DegenerateFit(BasinLabError):
    """Linear fit input has fewer than two distinct x values."""


class SizeMismatch(BasinLabError):
    """Grid size does not match the expected tiling size."""


class ParseError(BasinLabError):
    """Malformed manifest file."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
