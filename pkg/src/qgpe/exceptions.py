"""Exception hierarchy shared across the package."""


class QgpeError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(QgpeError, ValueError):
    """Invalid user-supplied configuration or out-of-range setup value."""


class DimensionError(QgpeError, ValueError):
    """Array argument has the wrong length or shape."""


class DegenerateStateError(QgpeError, ValueError):
    """A state carries no mass where the operation requires some."""


class SolverError(QgpeError, RuntimeError):
    """A numerical routine failed to produce a usable result."""
