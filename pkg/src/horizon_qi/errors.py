"""Exception hierarchy shared by every module of the package."""


class HorizonQIError(Exception):
    """Base class for all package errors."""


class DimensionError(HorizonQIError, ValueError):
    """Matrix shapes are inconsistent or exceed the configured maximum."""


class ArgumentError(HorizonQIError, ValueError):
    """An argument is malformed (empty subset, unknown label, wrong size)."""


class ContractError(HorizonQIError, ValueError):
    """An input violates a numerical contract (Hermiticity, trace, PSD, norm)."""


class DomainError(HorizonQIError, ValueError):
    """A physical parameter lies outside its admissible range."""


class ConfigError(HorizonQIError, ValueError):
    """An optimizer or sweep configuration is invalid."""
