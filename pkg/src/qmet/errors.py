"""Exception hierarchy.

Everything raised on purpose by the package derives from :class:`QmetError`.
Input-validation failures are also ``ValueError``; numerical failures are
``ArithmeticError``.
"""


class QmetError(Exception):
    pass


class ValidationError(QmetError, ValueError):
    pass


class NumericalError(QmetError, ArithmeticError):
    pass


# linalg
class NotHermitianError(ValidationError):
    pass


class DimensionMismatchError(ValidationError):
    pass


class ConvergenceError(NumericalError):
    pass


# qubit
class OutOfPlaneError(ValidationError):
    pass


class ZeroStateError(ValidationError):
    pass


class PoleAtUnitSzError(ValidationError):
    pass


class ZeroProbabilityWithNonzeroDerivativeError(NumericalError):
    pass


# spinrep
class BadAxisError(ValidationError):
    pass


class OddNForTwinFockError(ValidationError):
    pass


class BadFockIndexError(ValidationError):
    pass


# fisher
class NotDensityMatrixError(ValidationError):
    pass


class NotHermitianGeneratorError(ValidationError):
    pass


class NotPovmError(ValidationError):
    pass


class SupportMismatchError(NumericalError):
    pass


# werner
class AlphaOutOfRangeError(ValidationError):
    pass


class AlphaZeroError(ValidationError):
    pass


class DegenerateDenominatorError(NumericalError):
    pass


# purestate
class BreakdownMismatchError(NumericalError):
    pass


class PreconditionViolatedError(ValidationError):
    pass


# estimate
class BadProbabilitiesError(ValidationError):
    pass


class DegenerateLikelihoodError(NumericalError):
    pass
