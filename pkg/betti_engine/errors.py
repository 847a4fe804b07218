class BettiEngineError(Exception):
    """Base class for every error raised by the engines."""


class UsageError(BettiEngineError):
    """Bad flags, unparsable input or a request beyond the configured bounds."""


class EmptyRange(BettiEngineError):
    """The requested enumeration range cannot contain anything."""


class VariableMismatch(BettiEngineError):
    pass


class MissingAssignment(BettiEngineError):
    pass


class NonpositiveGrading(BettiEngineError):
    """A geometric factor whose q-exponent would never truncate."""


class OddExponent(BettiEngineError):
    """Odd cohomology showed up where only (p,p) classes can live."""


class InternalInconsistency(BettiEngineError):
    """
    A combinatorial convention was violated (designated box missing,
    negative character coefficient, ...). Never a user error.
    """


USER_ERRORS = (UsageError, EmptyRange, VariableMismatch, MissingAssignment,
               NonpositiveGrading, OddExponent)
