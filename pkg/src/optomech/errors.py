"""Exception types shared across the package."""


class OptomechError(Exception):
    """Base class for every error raised by this package."""


class DomainError(OptomechError, ValueError):
    """An input value, configuration key, or precondition is invalid."""


class NumericalError(OptomechError, RuntimeError):
    """A numerical routine failed to meet its accuracy contract."""


class SingularityError(NumericalError):
    """A scalar function of an operator was evaluated too close to a pole."""


class LabelingError(OptomechError, RuntimeError):
    """Photon-sector labeling failed (missing or unreliable sector)."""


class ResourceLimitError(OptomechError, RuntimeError):
    """A requested computation exceeds the configured size caps."""
