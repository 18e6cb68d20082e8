"""Exception hierarchy shared by all modules."""


class PDCError(Exception):
    """Base class for every error raised by pdcount."""


class ValidationError(PDCError, ValueError):
    """Input does not satisfy a documented precondition."""


class InvalidEmbedding(ValidationError):
    """The rotation system is not a valid plane embedding."""


class InstanceFormatError(ValidationError):
    """An instance file is malformed; the message names the offending field."""


class PromiseViolation(ValidationError):
    """A reduction or solver was called outside its input promise."""


class SizeCapExceeded(ValidationError):
    """A brute-force oracle was asked to enumerate a graph that is too large."""


class InterpolationError(ValidationError):
    """Interpolation nodes are duplicated or the grid is malformed."""


class NonInvertibleDivisor(ValidationError):
    """Truncated division by a series whose constant coefficient is zero."""


class DegreeDominanceError(ValidationError):
    """A monomial l^i X^j with i > j or j > k was found before substitution."""


class InvariantError(PDCError, AssertionError):
    """An internal consistency check failed; this indicates a bug."""
