"""Exception hierarchy shared by all modules."""


class BandphaseError(Exception):
    """Base class for every error raised by this package."""


class InvalidParameter(BandphaseError, ValueError):
    pass


class BandMismatch(BandphaseError, ValueError):
    pass


class GridMismatch(BandphaseError, ValueError):
    pass


class QuadratureTooCoarse(BandphaseError, ArithmeticError):
    pass


class ProgressiveWaveletNoLimit(BandphaseError):
    """The two one-sided moment limits of a wavelet disagree.

    Raised for progressive wavelets, whose left limit is identically zero.
    """


class NoFiniteOrder(BandphaseError):
    pass


class EdgeLeakage(BandphaseError):
    """Samples do not decay at the window edges; the window is too small."""


class AmbiguousSigns(BandphaseError):
    """Two distinct sign patterns explain the data almost equally well."""

    def __init__(self, message, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)


class TooManyIntervals(BandphaseError):
    pass


class NotConverging(BandphaseError):
    pass


class DCObstruction(BandphaseError):
    pass


class Stalled(BandphaseError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
