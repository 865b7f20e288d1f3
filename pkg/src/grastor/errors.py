"""Exception types. Precondition failures derive from PreconditionError."""


class GrastorError(Exception):
    pass


class ParseError(GrastorError, ValueError):
    pass


class PreconditionError(GrastorError):
    pass


class DimensionError(PreconditionError, ValueError):
    pass


class NotInvertible(PreconditionError, ZeroDivisionError):
    pass


class NotTransversal(PreconditionError):
    pass


class NotAdmissible(PreconditionError):
    pass


class NotEnumerable(PreconditionError):
    pass


class LimitExceeded(PreconditionError):
    pass


class DegenerateForm(PreconditionError):
    pass


class NotCompatible(PreconditionError):
    pass


class MissingBasePoint(PreconditionError):
    pass


class CharacteristicTwo(PreconditionError):
    pass


class NotInGroup(PreconditionError):
    pass


class InvariantViolation(GrastorError, AssertionError):
    """A proven identity failed; indicates a bug, never bad input."""
