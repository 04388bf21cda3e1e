"""Exception types raised across the package.

Every error derives from :class:`UncqError` so callers can catch the whole
family with one clause.  All constructors accept a plain message; the io
errors additionally carry the offending line number.
"""


class UncqError(Exception):
    """Base class for all errors raised by this package."""


class NegativeMassError(UncqError):
    """A probability vector contains an entry below the -1e-12 clamp floor."""


class AllZeroError(UncqError):
    """A probability vector sums to zero (or less) and cannot be normalized."""


class SumNotOneError(UncqError):
    """A probability vector's entries deviate from sum 1 by more than the tolerance."""


class DimMismatchError(UncqError):
    """Two probability vectors (or sample rows) disagree on the number of classes."""


class EmptySamplesError(UncqError):
    """An ensemble item carries no posterior samples."""


class BadLabelError(UncqError):
    """A label lies outside [0, K)."""


class MissingSingleError(UncqError):
    """A measure with predictor (A) was requested but the item has no single model."""


class MissingReferenceError(UncqError):
    """A measure with truth approximation (1) was requested but the item has no reference."""


class NeedTwoSamplesError(UncqError):
    """An off-diagonal pair estimator or the identity audit needs N >= 2 samples."""


class OneClassOnlyError(UncqError):
    """A detection metric needs at least one positive and one negative item."""


class ParseError(UncqError):
    """A record line is not valid JSON or does not match the record schema."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class ValidationError(UncqError):
    """A parsed record failed domain validation."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class KInconsistentError(UncqError):
    """A record's class count differs from earlier records in the same file."""

    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line
