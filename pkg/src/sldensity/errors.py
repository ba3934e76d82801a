"""Exception hierarchy shared by the numerical modules."""


class SLDensityError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPotentialError(SLDensityError, ValueError):
    pass


class DomainError(SLDensityError, ValueError):
    pass


class UnsupportedOperationError(SLDensityError, NotImplementedError):
    pass


class ResonanceError(SLDensityError, ArithmeticError):
    pass


class SeriesNotConvergedError(SLDensityError, ArithmeticError):
    pass


class StiffnessError(SLDensityError, ArithmeticError):
    """Adaptive step size collapsed below the allowed minimum."""

    def __init__(self, message, x=None, h=None, nsteps=None):
        super().__init__(message)
        self.x = x
        self.h = h
        self.nsteps = nsteps


class TurningPointError(SLDensityError, ValueError):
    pass


class MatchingPointError(SLDensityError, ValueError):
    """Approximant denominator or R component is not positive at the matching point."""


class RefinementError(SLDensityError, ArithmeticError):
    """Matching-point refinement did not meet the requested tolerance."""

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)
