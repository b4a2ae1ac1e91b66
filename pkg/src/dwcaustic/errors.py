"""Exception types raised by the library."""


class DwCausticError(Exception):
    """Base class for all library errors."""


class DomainError(DwCausticError, ValueError):
    """Argument outside the domain of a function (separatrix, k = 1, ...)."""


class RegionError(DwCausticError, ValueError):
    """Point lies outside the (q0, Theta) region an operation is defined on."""


class CausticError(DwCausticError, ArithmeticError):
    """Fluctuation determinant vanishes within tolerance."""

    def __init__(self, message, delta=0.0):
        super().__init__(message)
        self.delta = delta


class ConvergenceError(DwCausticError, RuntimeError):
    """Iterative solver or continuation failed to converge."""

    def __init__(self, message, last_good=None):
        super().__init__(message)
        self.last_good = last_good


class BranchError(DwCausticError, ArithmeticError):
    """Closed-form and quadrature actions disagree (wrong branch)."""


class OrderingError(DwCausticError, ValueError):
    """Actions passed in the wrong order for the effective potential."""


class GridTooSmall(DwCausticError, ValueError):
    """Spectral grid does not contain the thermal density."""
