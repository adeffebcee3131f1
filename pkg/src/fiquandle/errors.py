"""Exception hierarchy shared by every module.

The CLI maps :class:`InputError` to exit status 2 and :class:`ResourceError`
to exit status 3, so library code must raise one of these rather than a bare
``ValueError`` whenever the caller is at fault or a cap was hit.
"""


class QuandleError(Exception):
    """Base class for all library errors."""


class InputError(QuandleError, ValueError):
    """Malformed or out-of-contract input."""


class ParseError(InputError):
    """Text input could not be parsed; ``position`` is a character offset."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


class ResourceError(QuandleError):
    """A configured size cap would be exceeded. Never a wrong answer."""

    def __init__(self, what, size=None, cap=None):
        super().__init__(what if size is None else f"{what}: size {size} exceeds cap {cap}")
        self.what = what
        self.size = size
        self.cap = cap


class ConsistencyError(QuandleError, AssertionError):
    """An internal identity failed (e.g. a chain map does not commute)."""
