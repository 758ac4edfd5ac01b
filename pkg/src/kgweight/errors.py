"""Exception types shared across the package."""


class KGWeightError(Exception):
    """Base class for all package errors."""


class DomainError(KGWeightError, ValueError):
    """Argument outside the domain where a function is defined."""


class CoincidenceError(KGWeightError, ValueError):
    """Two points of a configuration are closer than the coincidence epsilon."""


class DimensionError(KGWeightError, ValueError):
    """Edge count does not match the number of free real coordinates."""


class DivergenceError(KGWeightError, ValueError):
    """A radial integral of an r^0 term was requested."""


class TruncationMismatchError(KGWeightError, ValueError):
    """Series with different truncation orders were combined."""


class NonRealCoefficientError(KGWeightError, ValueError):
    """A series still carries an unresolved factor of i where a real value is required."""


class UnsupportedParametersError(KGWeightError, ValueError):
    """No closed form is implemented for the requested parameters."""


class NoFitError(KGWeightError):
    """No rational combination of the basis matches the value within tolerance."""


class GraphFormatError(KGWeightError, ValueError):
    """Malformed graph JSON document."""
