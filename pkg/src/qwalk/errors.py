"""Exception hierarchy shared across the package."""


class QwalkError(Exception):
    """Base class for all package-specific errors."""


class ParameterError(QwalkError, ValueError):
    """A walk parameter or configuration value is outside its legal range."""


class DomainError(QwalkError, ValueError):
    """An evaluation point lies outside the domain of the requested quantity."""


class DegenerateCaseError(QwalkError):
    """The requested quantity degenerates at this coin angle (theta at 0 or pi/2)."""


class VerificationError(QwalkError):
    """A built-in numerical self-check failed."""


class NormDriftError(VerificationError):
    """Probability normalization drifted beyond the allowed diagnostic budget."""
