"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Raised when inputs, grids, or run settings are inconsistent."""


class NumericsError(RuntimeError):
    """Raised when a computation produces non-finite or invalid numbers."""
