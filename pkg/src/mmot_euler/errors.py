"""Exception hierarchy shared across the package."""


class MMOTError(Exception):
    """Base class for all package errors."""


class InvalidArgument(MMOTError, ValueError):
    pass


class EndpointMapUndefined(MMOTError, ValueError):
    """The requested endpoint map does not preserve the grid."""


class ResourceLimit(MMOTError):
    """An enumeration or search would exceed its configured cap."""


class InconsistentPlan(MMOTError, ValueError):
    """A plan violates a structural requirement (endpoint condition, masses)."""


class SolverError(MMOTError, RuntimeError):
    """The LP solver failed in a way that should not happen (cycling, unboundedness)."""
