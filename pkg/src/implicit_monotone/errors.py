"""Exception hierarchy shared by all modules."""


class ImplicitMonotoneError(Exception):
    pass


class ConfigError(ImplicitMonotoneError, ValueError):
    """Invalid grid, scheme or experiment parameters."""


class DataError(ImplicitMonotoneError, ValueError):
    """Non-finite or otherwise unusable input data."""


class ModelError(ImplicitMonotoneError, ArithmeticError):
    """A flux or source evaluator returned a non-finite value."""


class SolverError(ImplicitMonotoneError, RuntimeError):
    """The per-step nonlinear solve did not converge.

    ``best`` holds the iterate with the smallest residual and ``report`` the
    :class:`~implicit_monotone.stepper.StepReport` of the failed step.
    ``partial`` is filled by :func:`~implicit_monotone.stepper.run` with the
    snapshots recorded before the failure.
    """

    def __init__(self, message, best=None, report=None):
        super().__init__(message)
        self.best = best
        self.report = report
        self.partial = []


class DivergenceError(SolverError):
    """An iterate became non-finite."""
