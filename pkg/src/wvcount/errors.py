"""Exception types shared across the package."""


class WvcountError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(WvcountError):
    """Syntax or well-formedness error in program text."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = "line %d, col %d: %s" % (line, col, message)
        super().__init__(message)


class NotPlainError(WvcountError):
    """An operation requiring a plain (epistemic-free) program got an ELP."""


class BruteForceCapExceeded(WvcountError):
    """A brute-force enumeration would exceed its configured size cap."""


class NoWorldViews(WvcountError):
    """Probability is undefined because the program has no world views."""


class BackendError(WvcountError):
    """A base solver call failed or produced unparsable output."""


class BackendTimeout(BackendError):
    """A base solver call exceeded its time limit."""
