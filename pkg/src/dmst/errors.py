"""Exception hierarchy for dmst."""


class DMSTError(Exception):
    """Base class of every error raised by this package."""


class NotPrimeError(DMSTError, ValueError):
    pass


class ReducibleModulusError(DMSTError, ValueError):
    pass


class NoDefaultModulusError(DMSTError, ValueError):
    pass


class DivisionByZeroError(DMSTError, ZeroDivisionError):
    pass


class FieldMismatchError(DMSTError, TypeError):
    pass


class FieldTooLargeError(DMSTError, ValueError):
    pass


class AmbientMismatchError(DMSTError, TypeError):
    pass


class ParityViolationError(DMSTError, ValueError):
    pass


class NotDivisibleError(DMSTError, ArithmeticError):
    pass


class ZeroDivisorError(DMSTError, ZeroDivisionError):
    pass


class NotInSubgroupError(DMSTError, ValueError):
    pass


class GroupTooLargeError(DMSTError, ValueError):
    pass


class BadIndexListError(DMSTError, ValueError):
    pass


class IndexOutOfRangeError(DMSTError, IndexError):
    pass


class TwistOutOfRangeError(DMSTError, ValueError):
    pass


class MissingCompositionError(DMSTError, KeyError):
    pass


class DegreeTooLargeError(DMSTError, ValueError):
    pass


class ParseError(DMSTError, ValueError):
    pass
