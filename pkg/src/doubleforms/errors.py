"""Exception hierarchy for the double-form package."""


class DoubleFormError(ValueError):
    """Base class for every error raised by this package."""


class InvalidIndex(DoubleFormError):
    pass


class InvalidSplit(DoubleFormError):
    pass


class DimensionExceeded(DoubleFormError):
    pass


class DimensionMismatch(DoubleFormError):
    pass


class OutOfRange(DoubleFormError):
    pass


class DegreeError(DoubleFormError):
    pass


class BianchiViolation(DoubleFormError):
    pass


class InvalidFrame(DoubleFormError):
    pass


class InvalidParameters(DoubleFormError):
    pass


class ParseError(DoubleFormError):
    pass


class SymmetryConflict(DoubleFormError):
    pass


class ConfigError(DoubleFormError):
    pass
