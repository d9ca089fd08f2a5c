"""Exception types raised across the package."""


class ForrelationError(Exception):
    """Base class for all package errors."""


class InvalidDimensionError(ForrelationError, ValueError):
    """A vector length is not a power of two, or two objects disagree on n."""


class InvalidArgumentError(ForrelationError, ValueError):
    pass


class DegenerateInputError(ForrelationError, ValueError):
    pass


class IllConditionedSystemError(ForrelationError, ValueError):
    """The covariance system is outside the regime where it can be solved reliably."""


class UnsupportedOrderError(ForrelationError, ValueError):
    pass


class TooLargeError(ForrelationError, ValueError):
    pass
