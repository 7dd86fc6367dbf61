"""Exception hierarchy shared by every module."""


class WreathFPPError(Exception):
    """Base class for all library errors."""


class ValidationError(WreathFPPError, ValueError):
    """Input failed a structural check (bad cycle string, non-normal subgroup, ...)."""


class ParseError(ValidationError):
    pass


class TrivialSubgroupError(ValidationError):
    pass


class NotSubgroupError(ValidationError):
    pass


class NotNormalError(ValidationError):
    pass


class DegreeTooSmallError(ValidationError):
    pass


class NotTransitiveError(ValidationError):
    pass


class ResourceLimitError(WreathFPPError):
    """A computation would exceed its configured enumeration cap.

    ``required`` carries the size that would have been needed, when known.
    """

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class InternalInvariantError(WreathFPPError, RuntimeError):
    """Raised when a mathematically guaranteed property is observed to fail."""
