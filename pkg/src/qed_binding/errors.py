"""Exception hierarchy shared by all modules."""


class QedBindingError(Exception):
    """Base class for all library errors."""


class ValidationError(QedBindingError, ValueError):
    """Invalid parameters or configuration input."""


class QuadratureError(QedBindingError):
    """A quadrature did not reach the requested tolerance."""


class ConvergenceError(QedBindingError):
    """An iterative solver failed to converge."""


class ResolutionError(QedBindingError):
    """A grid is too coarse for the requested quantity."""


class ConsistencyError(QedBindingError):
    """Two independent computations of the same quantity disagree."""


class NoBoundStateError(QedBindingError):
    """A bound state was requested outside the coupling range where one exists."""
