"""Exception types shared across the toolkit."""


class TldiffError(Exception):
    """Base class for all toolkit errors."""


class InvalidDomainError(TldiffError):
    """Domain has empty interior or an inconsistent description."""


class InfeasibleConstantError(TldiffError):
    """A covering constraint cannot be met; carries the first bad cube."""

    def __init__(self, message, cube=None):
        super().__init__(message)
        self.cube = cube


class CoveringError(TldiffError):
    """Covering lookup failed or a required covering feature is missing."""


class CapabilityError(TldiffError):
    """Requested order/dimension is outside the supported range."""


class IncompleteInputError(TldiffError):
    """A derivative table is missing an order required by the expansion."""


class ResolutionError(TldiffError):
    """Grid too coarse for the requested operation."""


class DegenerateInputError(TldiffError):
    """Empty or single-point sample set where more data is required."""


class SpecError(TldiffError):
    """Norm parameters violate the admissibility conditions."""


class ConditioningError(TldiffError):
    """A linear system arising from a degenerate sample mask is singular."""


class CoverageError(TldiffError):
    """Interpolation or composition has no sample support."""


class BiLipschitzError(TldiffError):
    """Sampled map is not injective / Jacobian degenerate on the grid."""


class NewtonDivergenceError(TldiffError):
    """Newton inversion failed to converge."""


class ConfigError(TldiffError):
    """Bad study configuration."""
