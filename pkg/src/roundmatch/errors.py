"""Exception types shared across the package."""


class RoundmatchError(Exception):
    """Base class for all errors raised by this package."""


class InputValidationError(RoundmatchError):
    """Malformed input data; the message names the offending field or id."""


class CapExceededError(RoundmatchError):
    """A configured search or enumeration budget was exhausted.

    ``incumbent`` carries the best result found before the budget ran out
    (may be None when nothing was completed).
    """

    def __init__(self, message, incumbent=None):
        super().__init__(message)
        self.incumbent = incumbent


class InternalConsistencyError(RoundmatchError):
    """A built-in self-check failed; indicates a bug, not bad input."""
