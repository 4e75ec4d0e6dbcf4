"""Exception types shared across the package."""


class RarebitError(Exception):
    """Base class for all errors raised by rarebit."""


class InvalidBaseError(RarebitError, ValueError):
    pass


class InvalidSpecError(RarebitError, ValueError):
    pass


class DomainError(RarebitError, ValueError):
    """A polynomial took a negative value where a natural number was needed."""

    def __init__(self, message, n=None):
        super().__init__(message)
        self.n = n


class PreconditionError(RarebitError, ValueError):
    pass


class AlphabetError(RarebitError, ValueError):
    """Raised when a binary-only measure receives a non-binary sequence."""


class SearchExhausted(RarebitError, RuntimeError):
    """A bounded witness search ran out of grid without finding a witness."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CertificateRefused(RarebitError, RuntimeError):
    """Verification failed at the chosen exponent, so no certificate is issued."""

    def __init__(self, message, l=None, failed=None):
        super().__init__(message)
        self.l = l
        self.failed = failed
