"""Exception types shared across the package.

Every domain error is a subclass of :class:`CurveDistError`, so callers (and
the CLI) can distinguish bad input from genuine bugs.
"""


class CurveDistError(Exception):
    """Base class for all domain errors."""


# -- surfaces and triangulations ------------------------------------------

class SurfaceTooSmall(CurveDistError):
    pass


class EulerMismatch(CurveDistError):
    pass


class Disconnected(CurveDistError):
    pass


class PunctureCountMismatch(CurveDistError):
    pass


class NotFlippable(CurveDistError):
    pass


class InvalidRelabel(CurveDistError):
    pass


class InvalidCurve(CurveDistError):
    pass


class Inessential(CurveDistError):
    pass


class ShorteningStalled(CurveDistError):
    pass


class ClosedSurfaceUnsupported(CurveDistError):
    pass


class GenusTooSmall(CurveDistError):
    pass


# -- train tracks -----------------------------------------------------------

class TrackInvalid(CurveDistError):
    pass


class MonogonFace(TrackInvalid):
    pass


class BigonFace(TrackInvalid):
    pass


class SmallSwitch(TrackInvalid):
    pass


class BadMeasure(CurveDistError):
    pass


class EmptySupport(CurveDistError):
    pass


class MissingEndMap(CurveDistError):
    pass


class TrackMismatch(CurveDistError):
    pass


# -- moves ------------------------------------------------------------------

class IsCurve(CurveDistError):
    """A move was requested on the degenerate circle track."""


class NotApplicable(CurveDistError):
    pass


class Terminated(CurveDistError):
    pass


class DegenerateSplit(CurveDistError):
    """The co-oriented switch asks a loop to split along itself.

    This only happens when the measure routes a branch's weight back into
    the same branch, i.e. the carried multicurve has closed components
    running parallel to that loop.  Connected carried curves never trigger
    it (unless the track is the curve itself, which is rejected earlier).
    """


# -- oracles and resource guards ---------------------------------------------

class TooLarge(CurveDistError):
    pass


class RadiusExceeded(CurveDistError):
    pass


class BudgetExceeded(CurveDistError):
    """Raised by classification runs that hit their resource budget.

    Carries the partial per-step log so the caller can inspect how far the
    run got.
    """

    def __init__(self, message, log=None):
        super().__init__(message)
        self.log = list(log) if log is not None else []
