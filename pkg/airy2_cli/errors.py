"""
Exceptions raised by airy2_cli
"""


class Airy2Error(Exception):
    """Base class for all airy2_cli errors"""


class InvalidArgumentError(Airy2Error, ValueError):
    """A parameter is outside its documented range"""


class OutOfDomainError(Airy2Error, ValueError):
    """An evaluation point lies outside the tabulated domain"""


class SingularMatrixError(Airy2Error, ArithmeticError):
    """A pivot fell below the singularity threshold"""


class NoConvergenceError(Airy2Error, RuntimeError):
    """An iterative solver did not reach its tolerance"""


class UnknownIdentityError(Airy2Error, KeyError):
    """The requested identity is not in the identity table"""

    def __str__(self) -> str:
        return Exception.__str__(self)


class AccuracyWarning(UserWarning):
    """Results are computed but the discretization is under-resolved"""
