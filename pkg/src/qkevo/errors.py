"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration value or malformed user input."""


class DataError(ValueError):
    """Dataset loading, splitting or feature-sampling failure."""


class TrainingError(RuntimeError):
    """The SVM solver cannot be run on the given problem."""


class EvaluationError(RuntimeError):
    """A fitness evaluation failed; the individual is demoted, not fatal."""
