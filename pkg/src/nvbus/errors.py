"""Exception types shared across the package."""


class NvbusError(Exception):
    """Base class for all package errors."""


class NormalizationError(NvbusError, ValueError):
    """Amplitudes or (alpha, beta) pairs that are not unit-norm."""


class ConfigurationError(NvbusError, ValueError):
    """Inconsistent frame/basis/parameter combinations."""


class DegenerateParametersError(NvbusError, ValueError):
    """Parameter sets for which a closed form is singular."""


class IntegrationError(NvbusError, RuntimeError):
    """Numerical integration failed to meet its contract.

    Carries ``t_reached`` so callers can report partial progress.
    """

    def __init__(self, message, t_reached=None):
        super().__init__(message)
        self.t_reached = t_reached
