"""Exception types raised by abssum."""


class AbssumError(ValueError):
    """Base class for all input/domain errors raised by the package."""


class NonFinite(AbssumError):
    pass


class NotSquare(AbssumError):
    pass


class ShapeMismatch(AbssumError):
    pass


class NotHermitian(AbssumError):
    pass


class NotPSD(AbssumError):
    pass


class NotContraction(AbssumError):
    pass


class AllZeroTuple(AbssumError):
    """Every member of the tuple is zero, so the norm ratio is undefined."""


class SOutOfRange(AbssumError):
    """Equiangular overlap outside [0, 1]."""


class PTooSmall(AbssumError):
    """Schatten exponent below the admissible range."""


class DomainError(AbssumError):
    pass


class UnsortedInput(AbssumError):
    pass


class NoConvergence(RuntimeError):
    """Iterative solver hit its cap; indicates a bracketing bug, not bad input."""
