"""Exception hierarchy shared by every module."""


class LeibnizError(Exception):
    """Base class for all errors raised by the package."""


class MixedFields(LeibnizError):
    pass


class DivisionByZero(LeibnizError, ZeroDivisionError):
    pass


class DimensionMismatch(LeibnizError):
    pass


class NotAnIdeal(LeibnizError):
    pass


class NotLeibniz(LeibnizError):
    pass


class RequiresFiniteField(LeibnizError):
    pass


class MaximalityViolated(LeibnizError):
    """The sum of all nilpotent (or solvable) ideals failed the property.

    Never expected mathematically; raised so the surprise gets reported.
    """


class CapExceeded(LeibnizError):
    pass


class BadParams(LeibnizError):
    pass


class ParseError(LeibnizError):
    pass
