"""Exception types raised across the lpdecode package."""
from typing import Optional


class MatrixFormatError(ValueError):
    """Malformed ALIST or dense matrix text."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DimensionError(ValueError):
    """Vector length does not match the matrix it is used with."""


class GuardExceededError(ValueError):
    """An enumeration guard (codewords, rays, row weight, LP budget) was exceeded."""


class NegativeEntryError(ValueError):
    """A pseudo-weight was requested for a vector with a negative entry."""


class HypothesisError(ValueError):
    """A guarantee bound was evaluated outside its theorem's hypothesis."""


class NotInNullspaceError(ValueError):
    """A vector passed as a nullspace vector does not satisfy H·ν = 0."""


class InconsistentObservationError(ValueError):
    """Peeling or back-substitution met a fully resolved row that contradicts its target."""


class ChannelParameterError(ValueError):
    """Channel parameter out of range, or an operation unsupported for the channel."""


class NoSolutionWithinK(RuntimeError):
    """The brute-force sparse decoder found no consistent support of size <= k_max."""


class SoundnessViolation(RuntimeError):
    """A proven implication was observed violated; indicates an implementation bug."""
