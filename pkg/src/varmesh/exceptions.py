"""Exception hierarchy shared across the package."""

from __future__ import annotations


class VarmeshError(Exception):
    """Base class for all package errors."""


class InputError(VarmeshError, ValueError):
    """Malformed arguments: wrong shapes, non-finite values, bad counts."""


class DomainError(VarmeshError, ValueError):
    """An evaluation point lies outside the declared domain."""


class WeightValidationError(InputError):
    """A weight function failed its positivity / boundedness check."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NumericalError(VarmeshError, RuntimeError):
    """A numerical routine failed to reach its tolerance.

    ``estimate`` carries whatever partial result was available.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class ConvergenceError(NumericalError):
    """An iterative solver ran out of iterations.

    Attributes
    ----------
    residual : float or None
        Residual of the last iterate.
    partial : object
        Best available partial result (solver specific).
    """

    def __init__(self, message, residual=None, partial=None):
        super().__init__(message, estimate=partial)
        self.residual = residual
        self.partial = partial


class MeshValidityError(VarmeshError):
    """A generated mesh has folded (non-positive Jacobian) cells."""


class ContractError(InputError):
    """An operator violates a structural precondition (e.g. symmetry)."""


class UnsupportedDimensionError(InputError):
    """Operation not implemented for the requested dimension."""
