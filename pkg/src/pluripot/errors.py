"""Exception types shared across the library."""


class PluripotError(Exception):
    """Base class for all library-specific errors."""


class DomainError(PluripotError):
    """Invalid domain description, or a point outside the required region."""


class UnsupportedDomainError(PluripotError):
    """No method is available for this domain/point/operation combination."""


class ConvergenceError(PluripotError):
    """A ladder, extrapolation, or iterative solver failed to converge."""
