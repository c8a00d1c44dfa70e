"""Exception types raised across the package.

All of them derive from :class:`ValueError` so callers validating user input
can catch one thing.
"""


class ValidationError(ValueError):
    """Base class for invalid inputs or configurations."""


class CutoffError(ValidationError):
    """A Fock index lies outside the truncated basis."""


class TruncationError(ValidationError):
    """The truncated Fock basis is too small for the state being represented."""

    def __init__(self, message, required_n_max=None):
        super().__init__(message)
        self.required_n_max = required_n_max


class SingularParameterError(ValidationError):
    """The ordering parameter ``s`` makes the quasiprobability formula singular."""


class ConfigurationError(ValidationError):
    """Numerical settings (step counts, grids, ratios) are unusable."""


class DescriptorMismatchError(ValidationError):
    """A result grid does not belong to the state it is compared against."""


class TailAmplificationWarning(RuntimeWarning):
    """Truncated tail mass is amplified beyond a safe level by the weight sum."""
