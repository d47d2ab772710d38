"""Exception types raised across the package."""


class FockLabError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(FockLabError):
    """An index or basis size is outside the truncated space."""


class TruncationOverflowError(FockLabError):
    """An operation would push significant amplitude past the hard dimension cap."""


class TruncationUnsafeError(FockLabError):
    """A moment of this order cannot be trusted on a state truncated this close to its edge."""


class AnnihilatedStateError(FockLabError):
    """The operation maps the state to (numerically) zero, which is not a state."""


class InvalidParameterError(FockLabError):
    """A state parameter is outside its admissible range."""


class InvalidOrderError(FockLabError):
    """The requested witness order is not admissible (e.g. odd squeezing order)."""


class UndefinedWitnessError(FockLabError):
    """The witness is undefined on this input (e.g. Mandel Q of vacuum)."""


class DegenerateDenominatorError(FockLabError):
    """A ratio-type witness has a vanishing denominator with a non-vanishing numerator."""


class PhaseUndefinedError(FockLabError):
    """Phase-fluctuation parameters are undefined when <sin> and <cos> both vanish."""


class StationaryPointError(FockLabError):
    """The interferometer signal derivative vanishes; phase uncertainty diverges."""


class ConvergenceError(FockLabError):
    """A series did not satisfy its stopping rule within the term budget."""


class ConfigError(FockLabError):
    """A sweep/dump configuration file is malformed."""
