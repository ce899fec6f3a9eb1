"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of a function."""


class ParameterError(ValueError):
    """A parameter set is invalid, e.g. a contour cannot separate the poles."""


class RegionError(ParameterError):
    """The closed form is not available for this parameter region.

    Callers are expected to fall back to a quadrature evaluation.
    """


class DegenerateChannelError(ValueError):
    """A channel realization makes a quantity undefined (zero gains)."""


class ConvergenceError(ArithmeticError):
    """Numerical integration did not converge.

    Attributes
    ----------
    estimates : tuple of float
        The last two estimates produced before giving up.
    """

    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)
