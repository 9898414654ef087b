"""Exception hierarchy shared by all heatcap modules."""


class HeatcapError(Exception):
    """Base class for all heatcap errors."""


class DomainError(HeatcapError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class HypothesisError(HeatcapError):
    """A model violates the standing geometric hypotheses (Ric >= rho > 0, convex boundary)."""


class UnsupportedModelError(HeatcapError):
    """The requested operation is only defined for round-cap models."""


class SolverError(HeatcapError):
    """The radial eigensolver failed to converge."""


class TruncationError(HeatcapError):
    """Spectral truncation is too coarse for the requested evaluation."""


class ConfigError(HeatcapError):
    """A run configuration failed schema validation."""
