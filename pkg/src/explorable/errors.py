"""Exception types shared across the package."""


class ExplorableError(Exception):
    """Base class for all package errors."""


class InvalidParameter(ExplorableError, ValueError):
    pass


class ResourceCapError(ExplorableError):
    """A configured size or step cap was reached."""

    def __init__(self, message: str, cap: int | None = None):
        super().__init__(message)
        self.cap = cap


class OracleFault(ExplorableError):
    """The oracle cannot answer truthfully (missing witness data)."""


class ConfigurationError(ExplorableError):
    pass


class InternalError(ExplorableError, AssertionError):
    """An invariant that the theory guarantees was observed to fail."""
