"""Exception hierarchy.

Every numeric failure raised by the package derives from :class:`SecantError`,
which lets the command line map them onto a single exit status.
"""


class SecantError(Exception):
    """Base class for numeric failures."""


class MultipleRootDetected(SecantError):
    pass


class DuplicateAbscissa(SecantError):
    pass


class SingularHit(SecantError):
    """The second component of the map has a vanishing denominator.

    ``kind`` is the :class:`~secant_dynamics.secant.SingularClass` of the point.
    """

    def __init__(self, kind, point):
        self.kind = kind
        self.point = point
        super().__init__(f"{kind.name} singularity at {point}")


class FocalHit(SingularHit):
    """Numerator and denominator vanish together: the map is discontinuous."""


class SingularJacobian(SecantError):
    pass


class CriticalPoint(SecantError):
    pass


class NotSingularSlope(SecantError):
    pass


class ChartDomain(SecantError):
    pass


class CornerOverflow(SecantError):
    """Both coordinates ran off to infinity (the puncture of the torus)."""


class DegreeTooLow(SecantError):
    pass


class NotCritical(SecantError):
    pass


class NotPeriodic(SecantError):
    pass


class DidNotConverge(SecantError):
    pass


class SingularEncounter(SecantError):
    pass


class IncompatibleQuadruple(SecantError):
    pass
