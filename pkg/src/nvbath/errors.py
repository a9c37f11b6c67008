"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Raised when a configuration value or combination is unusable."""


class ContractViolationError(ValueError):
    """Raised when a numerical input breaks a kernel precondition
    (non-Hermitian matrix, significantly negative eigenvalue, ...)."""
