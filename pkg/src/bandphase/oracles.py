"""Slow reference computations used to cross-check the fast paths.

The time-domain route evaluates ψ by inverse-Fourier quadrature of ψ̂ and
integrates (1/a) ∫ f(x) conj(ψ((x − b)/a)) dx directly.
"""

from __future__ import annotations

import math

import numpy as np

from .quadrature import QuadratureSpec, rule
from .signals import BandlimitedSignal, evaluate
from .wavelets import Wavelet

_SPECTRUM_FLOOR = 1e-13
_TIME_FLOOR = 1e-13
# Radians of e^{iθ} that one 32-node Gauss-Legendre panel integrates to full precision.
_PHASE = 30.0


def _panels(length, freq, q):
    return max(q.panels, int(math.ceil(2 * math.pi * length * freq / _PHASE)))


def spectral_support(w: Wavelet, limit: float = 400.0, step: float = 0.05) -> tuple:
    """Interval outside which |ψ̂| stays below 1e-13 of its peak on a scan
    of [-limit, limit]."""
    xi = np.arange(-limit, limit + step, step)
    mag = np.abs(w.fourier_at(xi))
    keep = np.nonzero(mag > _SPECTRUM_FLOOR * np.max(mag))[0]
    lo = xi[max(keep[0] - 1, 0)]
    hi = xi[min(keep[-1] + 1, xi.size - 1)]
    return float(lo), float(hi)


def wavelet_time(w: Wavelet, x, q: QuadratureSpec | None = None) -> np.ndarray:
    """ψ(x) = ∫ ψ̂(ξ) e^{2πiξx} dξ by composite quadrature split at 0."""
    q = q or QuadratureSpec()
    x = np.atleast_1d(np.asarray(x, dtype=float))
    lo, hi = spectral_support(w)
    xmax = float(np.max(np.abs(x), initial=0.0))
    nodes, weights = [], []
    for a, b in ((lo, min(hi, 0.0)), (max(lo, 0.0), hi)):
        if b > a:
            xi, wt = rule(a, b, _panels(b - a, xmax, q), q)
            nodes.append(xi)
            weights.append(wt)
    xi = np.concatenate(nodes)
    spec = w.fourier_at(xi) * np.concatenate(weights)
    out = np.empty(x.shape, dtype=complex)
    step = max(1, (1 << 21) // xi.size)
    for s in range(0, x.size, step):
        out[s:s + step] = np.exp(2j * math.pi * np.outer(x[s:s + step], xi)) @ spec
    return out


def time_support(w: Wavelet, limit: float = 50.0, step: float = 0.1,
                 q: QuadratureSpec | None = None) -> float:
    """Half-width beyond which |ψ| stays below 1e-13 of its peak on a scan of
    [-limit, limit]; ``limit`` itself for slowly decaying wavelets."""
    t = np.arange(-limit, limit + step, step)
    mag = np.abs(wavelet_time(w, t, q))
    keep = np.nonzero(mag > _TIME_FLOOR * np.max(mag))[0]
    return float(min(limit, max(abs(t[keep[0]]), abs(t[keep[-1]])) + step))


def transform_time(f: BandlimitedSignal, w: Wavelet, b: float, a: float,
                   margin: float = 12.0, q: QuadratureSpec | None = None) -> complex:
    """(1/a) ∫ f(x) conj(ψ((x − b)/a)) dx by composite Gauss-Legendre in x.

    The x-range is the signal window widened by ``margin`` time units,
    intersected with the support of the dilated wavelet.
    """
    q = q or QuadratureSpec()
    half = a * time_support(w, q=q)
    lo = max(min(f.m_min * f.spacing, b) - margin, b - half)
    hi = min(max(f.m_max * f.spacing, b) + margin, b + half)
    lo_w, hi_w = spectral_support(w)
    top_freq = max(f.omega, max(abs(lo_w), abs(hi_w)) / a)
    x, wt = rule(lo, hi, _panels(hi - lo, top_freq, q), q)
    vals = evaluate(f, x) * np.conj(wavelet_time(w, (x - b) / a, q))
    return complex(np.sum(vals * wt) / a)


def psi_norm(w: Wavelet, a: float = 1.0, q: QuadratureSpec | None = None) -> float:
    """||ψ_a^#||_2 = a^{-1/2} ||ψ̂||_2."""
    q = q or QuadratureSpec()
    lo, hi = spectral_support(w)
    xi, wt = rule(lo, hi, max(q.panels, int(hi - lo) + 1), q)
    return math.sqrt(float(np.sum(np.abs(w.fourier_at(xi)) ** 2 * wt)) / a)
