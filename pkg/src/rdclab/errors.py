"""Semantic exceptions shared across the package."""


class RdcError(Exception):
    """Base class for all rdclab errors."""


class ParameterError(RdcError, ValueError):
    """Inputs violate a documented precondition (domain, shape, range)."""


class DegenerateDependenceError(RdcError):
    """A conditional-entropy argument collapsed to a non-positive value.

    Only reachable when both the source correlation and the reconstruction
    correlation are simultaneously perfect, i.e. the label is a deterministic
    function of the reconstruction.
    """


class SizeGuardError(RdcError):
    """An enumeration would exceed the combinatorial guard rails."""


class InfeasibleBudgetError(RdcError):
    """No decoder satisfies the requested distortion budget."""
