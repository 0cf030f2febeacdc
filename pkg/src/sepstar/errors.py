"""Exception hierarchy shared by every layer of the engine."""


class StarError(Exception):
    """Base class for all engine errors."""


class DivisionByZero(StarError, ZeroDivisionError):
    pass


class DimensionMismatch(StarError, ValueError):
    pass


class IndexOutOfRange(StarError, IndexError):
    pass


class ZeroConstantTerm(StarError, ArithmeticError):
    pass


class InsufficientAccuracy(StarError, ArithmeticError):
    """A requested coefficient lies at or beyond the trusted jet degree."""


class DegenerateMetric(StarError, ArithmeticError):
    pass


class BadPotential(StarError, ValueError):
    pass


class TensorOrderUnavailable(StarError, ValueError):
    pass


class ZetaBarPresent(StarError, ValueError):
    pass


class NotInEDoublePrime(StarError, ValueError):
    """Input to the inverse Euler operator has a fibre-free component."""


class BadManifest(StarError, ValueError):
    pass
