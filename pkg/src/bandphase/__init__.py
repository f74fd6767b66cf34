"""Sign retrieval for real bandlimited signals from wavelet transform magnitudes."""

from .cwt import MagnitudeMeasurements, measure, measure_complex, transform, transform_grid
from .errors import (AmbiguousSigns, BandMismatch, BandphaseError, DCObstruction, EdgeLeakage,
                     GridMismatch, InvalidParameter, NoFiniteOrder, NotConverging,
                     ProgressiveWaveletNoLimit, QuadratureTooCoarse, Stalled, TooManyIntervals)
from .quadrature import QuadratureSpec
from .signals import (BandlimitedSignal, SpectralFactor, TruncationWarning, analytic_rep,
                      derivative, dist_up_to_phase, dist_up_to_sign, evaluate, fourier, hilbert,
                      inner, l2_distance, norm, realize, rotate_analytic, sinc)
from .wavelets import (MomentProfile, Wavelet, cauchy, chirp, custom, from_descriptor,
                       gauss_lowpass, morlet, normalization_gain, normalize, probe_moment_order)

__all__ = [
    "AmbiguousSigns", "analytic_rep", "BandlimitedSignal", "BandMismatch", "BandphaseError",
    "cauchy", "chirp", "custom", "DCObstruction", "derivative", "dist_up_to_phase",
    "dist_up_to_sign", "EdgeLeakage", "evaluate", "fourier", "from_descriptor", "gauss_lowpass",
    "GridMismatch", "hilbert", "inner", "InvalidParameter", "l2_distance", "MagnitudeMeasurements",
    "measure", "measure_complex", "MomentProfile", "morlet", "NoFiniteOrder", "norm",
    "normalization_gain", "normalize", "NotConverging", "probe_moment_order",
    "ProgressiveWaveletNoLimit", "QuadratureSpec", "QuadratureTooCoarse", "realize",
    "rotate_analytic", "sinc", "SpectralFactor", "Stalled", "TooManyIntervals", "transform",
    "transform_grid", "TruncationWarning", "Wavelet",
]

__version__ = "0.1.0"
