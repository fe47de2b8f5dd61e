"""Exception types shared across the package."""


class RpqaoaError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInputError(RpqaoaError, ValueError):
    """Arguments violate an operation contract (shape, range, alignment)."""


class CapacityError(RpqaoaError, ValueError):
    """Problem size exceeds a configured capacity limit."""


class FormatError(RpqaoaError, ValueError):
    """Malformed external data (graph6 records, summary CSV files)."""


class DomainError(RpqaoaError, ValueError):
    """Value outside the mathematical domain of an operation."""


class ConfigError(RpqaoaError, ValueError):
    """Contradictory or incomplete run configuration."""
