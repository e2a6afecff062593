"""Exception types shared across the package."""


class DomainError(ValueError):
    """Invalid argument: wrong dimension, non-finite input, malformed box."""


class ConstructionError(ValueError):
    """A structured-set description is internally inconsistent."""


class QuadratureError(RuntimeError):
    """Numerical integration did not reach the requested accuracy."""

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class PreconditionError(ValueError):
    """A caller contract was violated (e.g. input is not a tiling / not an ONB)."""


class InvariantViolation(RuntimeError):
    """A structural invariant that must hold for verified inputs failed."""


class UnsupportedWindowError(DomainError):
    """The requested operation is only available for the unit-cube window."""
