"""
Exception hierarchy for the simulator, agent and harness.
"""


class HvacSimError(Exception):
    """Base class for every error raised by this package."""


class UsageError(HvacSimError, ValueError):
    """An operation was called with arguments outside its contract."""


class ConfigError(HvacSimError):
    """A building or run configuration is invalid."""


class WeatherFormatError(HvacSimError):
    """A weather CSV is malformed or irregular."""


class StabilityError(ConfigError):
    """The explicit integrator would be unstable at the requested step."""


class IntegrationBlowupError(HvacSimError):
    """A zone temperature became non-finite during integration."""


class TrainingDivergenceError(HvacSimError):
    """The TD loss became non-finite."""


class UndefinedMetricError(HvacSimError):
    """A metric has no defined value for the given log."""
