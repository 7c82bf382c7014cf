"""Exception types shared across the package."""


class ContractViolationError(ValueError):
    """An argument breaks a documented precondition (shape, length, domain)."""


class OracleTooLargeError(ValueError):
    """The quadratic reference multiply was asked for a dimension above its guard."""


class AdmissibilityError(ValueError):
    """A bound was evaluated outside its admissible parameter range."""


class ConfigError(ValueError):
    """Invalid experiment or CLI configuration."""


class ExperimentAssertionError(RuntimeError):
    """A built-in experiment assertion (landmark value, sandwich, scaling) failed.

    Raised after the report file has been written, so the offending numbers
    are available for inspection.
    """
