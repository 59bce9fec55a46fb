"""Exception types shared across the package."""


class GSQGError(Exception):
    """Base class for all package-specific errors."""


class DomainError(GSQGError, ValueError):
    """A parameter is outside its mathematically admissible range."""


class NoFeasibleT0(GSQGError):
    """The joint (t0, delta_l) search exceeded its iteration cap.

    The search is guaranteed to terminate for admissible alpha, so hitting
    the cap signals a bug, not a mathematical obstruction.
    """


class AssemblyError(GSQGError):
    """A quadrature weight matrix came out with non-finite entries."""


class DegenerateProfile(GSQGError):
    """The normalization functional c(f) degenerated (constant-function collapse)."""


class TailFitError(GSQGError):
    """The fitted far-field decay exponent makes the b-functional divergent."""


class NegativeT(GSQGError):
    """The half-plane T operator returned significantly negative values.

    The operator is provably nonnegative on admissible profiles, so this
    signals a quadrature failure.
    """


class NewtonFail(GSQGError):
    """Newton iteration for the limiting cubic failed to converge."""


class GridError(GSQGError):
    """Invalid 2D grid configuration (size or memory budget)."""
