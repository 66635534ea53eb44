"""Exception hierarchy.

Every error raised by the package derives from :class:`NonrecipError`; the
CLI maps :class:`ParameterError` subclasses to exit code 2 and
:class:`NumericalError` subclasses to exit code 3.
"""


class NonrecipError(Exception):
    pass


class ParameterError(NonrecipError, ValueError):
    """Invalid user-supplied parameters."""


class NumericalError(NonrecipError, ArithmeticError):
    """A computation could not produce a trustworthy result."""


class NonPositiveRate(ParameterError):
    pass


class NegativeCoupling(ParameterError):
    pass


class AsymmetricSystem(ParameterError):
    """kappa1 != kappa2 or |G1| != |G2|; use the general oracle path instead."""


class ZeroCoupling(ParameterError):
    pass


class ZeroG0(ParameterError):
    pass


class BadGrid(ParameterError):
    pass


class ThetaDegenerate(ParameterError):
    pass


class InvalidBranch(ParameterError):
    pass


class StepTooLarge(ParameterError):
    pass


class SpanTooShort(ParameterError):
    pass


class WindowTooShort(ParameterError):
    pass


class NotFound(NonrecipError, LookupError):
    """A spectral feature (e.g. half-maximum crossing) is not on the grid."""


class NoConvergence(NumericalError):
    def __init__(self, message, residual=float("nan"), iterations=0):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class SingularDenominator(NumericalError):
    pass


class SingularMatrix(NumericalError):
    pass
