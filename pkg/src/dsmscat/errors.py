"""Exception types shared across the package."""


class DegenerateDataError(ValueError):
    """Measured data is identically zero (or otherwise unusable)."""


class DiscretizationError(ValueError):
    """Scatterer discretization produced no usable cells."""


class EvaluationPointError(ValueError):
    """Field evaluation point lies inside the scatterer support."""


class SolverError(RuntimeError):
    """The collocation system could not be solved reliably."""


class ConfigError(ValueError):
    """Bad command-line configuration file or flag combination."""
