"""Django Orthoscheme Exceptions"""


class OrthoschemeException(Exception):
    """Base exception for Orthoscheme"""

    pass


class InvalidDimension(OrthoschemeException, ValueError):
    """Dimension, face size or cone parameter out of range"""

    pass


class InvalidFaceIndex(OrthoschemeException, ValueError):
    """Index set that does not name a face of the orthoscheme"""

    pass


class MissingFace(OrthoschemeException, KeyError):
    """Raised when a gamma map does not cover every face it is summed over."""

    pass


class BudgetExceeded(OrthoschemeException):
    """Explicit enumeration refused because it would visit too many terms"""

    pass


class NotSimplicial(OrthoschemeException, ValueError):
    """Cone rays are linearly dependent"""

    pass


class DegenerateCone(OrthoschemeException, ValueError):
    """Solid angle formula has vanishing numerator and denominator"""

    pass


class RootPrecisionFailure(OrthoschemeException, ArithmeticError):
    """Polynomial roots do not meet the residual bound after precision escalation"""

    pass


class NumericalError(OrthoschemeException, ArithmeticError):
    """Singular system, infeasible program or failed internal self-check"""

    pass


class CacheKeyValidationError(OrthoschemeException):
    """Result cache key validation error"""

    pass


class InvalidSamplingPlan(OrthoschemeException, ValueError):
    """Sample count, seed or chunk size that cannot drive an estimator"""

    pass


class InvalidPolynomial(OrthoschemeException, ValueError):
    """Zero polynomial, zero leading coefficient or non-finite coefficients"""

    pass
