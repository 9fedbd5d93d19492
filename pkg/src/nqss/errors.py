"""Exception types raised across the package."""


class InvalidInputError(ValueError):
    """An argument violates an operation's precondition."""


class UnsupportedInputError(ValueError):
    """Input is well-formed but outside what the operation is defined on."""


class ResourceLimitError(RuntimeError):
    """Requested register is larger than the dense-simulation cap."""
