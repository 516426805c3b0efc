"""Exception hierarchy shared by the analysis, simulation and CLI layers."""


class HopfCCError(Exception):
    """Base class for every error raised by this package."""


class InvalidDemand(HopfCCError):
    pass


class NoEquilibrium(HopfCCError):
    pass


class InvalidModel(HopfCCError):
    """The linearisation coefficient b is not negative."""


class GainOutOfRange(HopfCCError):
    """Feedback gain h outside [b/2, 0)."""


class DegenerateFrequency(HopfCCError):
    pass


class NoRootFound(HopfCCError):
    pass


class TargetTooSmall(HopfCCError):
    pass


class BracketFailure(HopfCCError):
    pass


class SingularNormalization(HopfCCError):
    pass


class SingularDenominator(HopfCCError):
    pass


class DegenerateBifurcation(HopfCCError):
    pass


class InvalidHistory(HopfCCError):
    pass


class FlaggedTrajectory(HopfCCError):
    pass


class InsufficientTail(HopfCCError):
    pass


class NoTransition(HopfCCError):
    pass


class ConfigError(HopfCCError):
    pass
