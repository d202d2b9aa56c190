"""Exception types raised by the library."""


class DegenerateParameterError(ValueError):
    """The parameter is one of the degenerate members (a = 0 or |a| = 1)."""


class DomainError(ValueError):
    """An operation was called outside the parameter range where it is defined."""


class NotInTongueError(LookupError):
    """No attracting cycle on the unit circle was found for the parameter."""


class SolverError(RuntimeError):
    """A Newton, bisection or continuation solve did not converge.

    ``last_good`` carries the last accepted iterate when there is one.
    """

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class ContourError(ValueError):
    """The integration contour does not isolate the requested fixed point."""
