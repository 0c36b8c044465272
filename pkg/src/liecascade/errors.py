"""Exception hierarchy shared by every module."""


class LieCascadeError(Exception):
    """Base class for all library errors."""


class InvalidType(LieCascadeError, ValueError):
    pass


class ShapeError(LieCascadeError, ValueError):
    pass


class InternalInvariantViolation(LieCascadeError, AssertionError):
    pass


class DegenerateString(LieCascadeError, ValueError):
    pass


class DegeneratePair(LieCascadeError, ValueError):
    pass


class NotARoot(LieCascadeError, ValueError):
    pass


class NotWeyl(LieCascadeError, ValueError):
    pass


class PreconditionViolated(LieCascadeError, ValueError):
    pass


class NotAFolding(LieCascadeError, ValueError):
    pass


class NoOuter(LieCascadeError, ValueError):
    pass


class InvalidCount(LieCascadeError, ValueError):
    pass


class InvalidIndex(LieCascadeError, ValueError):
    pass


class NotCommuting(LieCascadeError, ValueError):
    pass


class NotInvolution(LieCascadeError, ValueError):
    pass


class UnsupportedType(LieCascadeError, ValueError):
    pass


class IncompleteCoefficients(LieCascadeError, ValueError):
    pass


class CounterexampleFound(LieCascadeError):
    """A classification failed to match any expected form.

    ``witness`` carries the offending data so callers can dump it.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
