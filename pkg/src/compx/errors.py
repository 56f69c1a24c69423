"""Exception hierarchy shared across the package."""


class CompxError(Exception):
    """Base class for all compx errors."""


class ConfigurationError(CompxError):
    """Invalid user configuration: flags, dataset declaration, target spec."""


class InsufficientDataError(CompxError):
    """Too few rows or too few completed sizes to fit anything meaningful."""


class DegenerateFitError(CompxError):
    """A family's design matrix is rank deficient on the given series."""


class CampaignError(CompxError):
    """The target function or command failed during a measurement campaign."""

    def __init__(self, message, size=None):
        super().__init__(message)
        self.size = size


class EmptyPlotError(CompxError):
    """Nothing to plot: no observations, or a single sample size."""
