"""Exception types shared across the package."""


class HopfcmError(Exception):
    """Base class for all domain errors raised by this package."""


class DivisionByZero(HopfcmError):
    """A field element with an identically zero denominator was formed."""


class PoleAtPoint(HopfcmError):
    """A rational expression was evaluated where its denominator vanishes."""


class SchemaError(HopfcmError):
    """A system definition document violates the input schema."""


class NonConvergence(HopfcmError):
    """An iterative solve exhausted its iteration budget."""


class RegionUndefined(HopfcmError):
    """An existence-region test was requested outside its domain of validity."""


class SingularTransform(HopfcmError):
    """A coordinate change with a singular linear part was requested."""


class NotHopf(HopfcmError):
    """The equilibrium does not satisfy the Hopf eigenvalue conditions."""


class BadTransform(HopfcmError):
    """The supplied matrix does not reduce the linear part to rotation + axis."""


class NotRealSystem(HopfcmError):
    """Complexified coefficients violate the conjugate-pairing constraints."""


class DegenerateLambda(HopfcmError):
    """The transverse eigenvalue is zero, so the recursion divisors degenerate."""


class NotAFirstIntegralCandidate(HopfcmError):
    """A constant function was offered as a first-integral candidate."""


class FocusObstruction(HopfcmError):
    """A secular (nonzero-mean) radial term appeared in the periodic-solution
    construction: the point is a focus at this order, not a center.

    ``value`` is normalized so that at the first obstruction it equals the
    matching focus quantity (the radial first-return coefficient divided by pi).
    """

    def __init__(self, order, value):
        self.order = order
        self.value = value
        super().__init__(f"focus obstruction at radial order {order}: {value}")


class TruncationTooLow(HopfcmError):
    """A jet was asked for a homogeneous part beyond its truncation degree."""


class BadPivots(HopfcmError):
    """The chosen pivot parameters do not make the leading linear parts invertible."""


class StiffnessFailure(HopfcmError):
    """The adaptive integrator underflowed its step size."""


class NoReturn(HopfcmError):
    """The orbit failed to return to the Poincare section within the horizon."""
