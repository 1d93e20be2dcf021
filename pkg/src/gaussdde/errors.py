"""Exception hierarchy shared by the numerical modules."""


class DdeError(Exception):
    """Base class for all errors raised by gaussdde."""


class DegenerateParams(DdeError, ValueError):
    """Parameters fall outside the domain of the requested operation."""


class InvalidDelay(DdeError, ValueError):
    pass


class NoConvergence(DdeError, ArithmeticError):
    pass


class BranchPointSingularity(NoConvergence):
    pass


class ToleranceNotMet(DdeError, ArithmeticError):
    def __init__(self, message, estimate=None, tol=None):
        super().__init__(message)
        self.estimate = estimate
        self.tol = tol


class SeriesOverflow(DdeError, OverflowError):
    pass


class DivergenceDetected(DdeError, ArithmeticError):
    """Trajectory magnitude crossed the divergence guard."""

    def __init__(self, message, escape_time):
        super().__init__(message)
        self.escape_time = escape_time


class OutOfHistory(DdeError, ValueError):
    pass


# failures the CLI maps to exit status 3
NUMERICAL_FAILURES = (ToleranceNotMet, NoConvergence, DivergenceDetected, SeriesOverflow)
