"""Exception hierarchy shared by every heinzlab module."""


class HeinzLabError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(HeinzLabError, ValueError):
    pass


class NonHermitian(HeinzLabError, ValueError):
    pass


class NoConvergence(HeinzLabError, ArithmeticError):
    pass


class NotPositiveDefinite(HeinzLabError, ValueError):
    pass


class ExponentOutOfRange(HeinzLabError, ValueError):
    pass


class ParamOutOfRange(HeinzLabError, ValueError):
    pass


class NonPositiveScalar(HeinzLabError, ValueError):
    pass


class KOutOfRange(HeinzLabError, ValueError):
    pass


class InvalidSpec(HeinzLabError, ValueError):
    pass


class SkippedHypothesis(HeinzLabError):
    """Raised by a check when its witness does not satisfy the hypotheses.

    Campaigns count these as skips, never as failures.
    """


class NotFound(HeinzLabError):
    pass


class UnknownCheck(HeinzLabError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class ConfigError(HeinzLabError, ValueError):
    pass


class ParseError(HeinzLabError, ValueError):
    pass
