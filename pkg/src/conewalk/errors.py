"""Exception types shared across the package."""


class ConewalkError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"


class ValidationError(ConewalkError):
    code = "validation"


class AngleNotRepresentable(ConewalkError):
    code = "angle-not-representable"


class BoundaryPointError(ConewalkError):
    code = "boundary-point"


class DegenerateCorrelation(ConewalkError):
    code = "degenerate-correlation"


class InsufficientMoments(ConewalkError):
    code = "insufficient-moments"


class SingularAngle(ConewalkError):
    code = "singular-angle"


class DegreeTooHigh(ConewalkError):
    code = "degree-too-high"


class MomentNotFinite(ConewalkError):
    code = "moment-not-finite"


class ResonantDegree(ConewalkError):
    code = "resonant-degree"


class AngleOutOfRange(ConewalkError):
    code = "angle-out-of-range"


class StartNotInterior(ConewalkError):
    code = "start-not-interior"


class MomentCheckInvalid(ConewalkError):
    code = "moment-check-invalid"


class InsufficientSurvivors(ConewalkError):
    code = "insufficient-survivors"


class InternalError(ConewalkError):
    """Raised when a condition the theory guarantees fails to hold."""

    code = "internal-error"
