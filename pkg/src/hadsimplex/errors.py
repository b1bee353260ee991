"""Exception types shared across the package."""


class HadsimplexError(Exception):
    """Base class for all errors raised by this package."""


class CapacityError(HadsimplexError):
    """Requested size exceeds what the enumeration or construction supports."""


class InvalidParameterError(HadsimplexError, ValueError):
    pass


class MalformedMatrixError(HadsimplexError, ValueError):
    pass


class MatrixParseError(MalformedMatrixError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NormalizationRequiredError(HadsimplexError, ValueError):
    """A Hadamard matrix was expected to carry an all-ones last column."""


class DegenerateSimplexError(HadsimplexError, ValueError):
    pass


class DimensionMismatchError(HadsimplexError, ValueError):
    pass


class InvariantViolation(HadsimplexError, AssertionError):
    """A mathematical identity or inequality that must hold did not."""
