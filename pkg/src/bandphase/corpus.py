"""Seeded random bandlimited test signals.

Random numbers come from numpy's ``default_rng`` (PCG64 bit generator, with
the seed passed straight to ``SeedSequence``). Coefficients are i.i.d.
uniform on [-1, 1], tapered in time by a raised-cosine window, then
smoothed by ``edge_order`` passes of the [1/4, 1/2, 1/4] kernel. The latter is a
raised-cosine taper in frequency, cos^{2K}(πξ/2Ω), so f̂ vanishes to order 2K
at the band edges and the signal decays like |x|^{-(2K+1)}.
"""

from __future__ import annotations

import numpy as np

from .signals import BandlimitedSignal, analytic_rep, norm, realize

EDGE_ORDER = 4


def rng_for(seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def _binomial(order: int, sign: float = 1.0) -> np.ndarray:
    k = np.array([1.0])
    for _ in range(order):
        k = np.convolve(k, [0.25 * sign, 0.5, 0.25 * sign])
    return k


def raised_cosine(n: int) -> np.ndarray:
    k = np.arange(1, n + 1)
    return 0.5 * (1.0 - np.cos(2.0 * np.pi * k / (n + 1)))


def random_real(rng: np.random.Generator, n_coeffs: int, omega: float = 1.0,
                edge_order: int = EDGE_ORDER) -> BandlimitedSignal:
    """Real signal with ``n_coeffs + 2*edge_order`` Nyquist coefficients,
    centered on the origin."""
    u = rng.uniform(-1.0, 1.0, n_coeffs) * raised_cosine(n_coeffs)
    c = np.convolve(u, _binomial(edge_order))
    return BandlimitedSignal(omega, c, -(len(c) - 1) // 2)


def random_bandpass(rng: np.random.Generator, n_coeffs: int, omega: float = 1.0,
                    edge_order: int = EDGE_ORDER) -> BandlimitedSignal:
    """Real signal whose spectrum also vanishes to order 2K at ξ = 0."""
    f = random_real(rng, n_coeffs, omega, edge_order)
    c = np.convolve(f.coeffs.real, _binomial(edge_order, -1.0))
    return BandlimitedSignal(omega, c, -(len(c) - 1) // 2)


def random_analytic(rng: np.random.Generator, n_coeffs: int, omega: float = 1.0,
                    edge_order: int = EDGE_ORDER, materialize: bool = False) -> BandlimitedSignal:
    """Analytic representation of a band-pass real draw.

    With ``materialize`` the result is a plain sinc series (Nyquist samples on
    a widened window), suitable for the signal file format.
    """
    f = analytic_rep(random_bandpass(rng, n_coeffs, omega, edge_order))
    return realize(f) if materialize else f


def unit(f: BandlimitedSignal) -> BandlimitedSignal:
    return f * (1.0 / norm(f))
