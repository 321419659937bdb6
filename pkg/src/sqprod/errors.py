"""Exception types raised across the package."""


class SqprodError(Exception):
    """Base class for every error this package raises deliberately."""


class ResourceLimitError(SqprodError):
    """A configured memory or work cap would be exceeded."""


class SearchLimitError(SqprodError):
    """A scan ran past its cap without finding what it was looking for."""


class PrecisionError(SqprodError):
    """A floating-point comparison stayed ambiguous after extended-precision recheck."""


class NotPrimeError(SqprodError, ValueError):
    def __init__(self, value: int, message: str | None = None):
        self.value = value
        super().__init__(message or f"{value} is not prime")


class ChainGapError(SqprodError):
    def __init__(self, start: int, end: int, message: str | None = None):
        self.start = start
        self.end = end
        super().__init__(message or f"no witness found covering [{start}, {end}]")
