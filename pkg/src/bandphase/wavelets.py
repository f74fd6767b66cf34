"""Closed-form frequency-domain wavelets and the vanishing-moment probe.

Every wavelet is described by ψ̂ alone. The Fourier convention is
ψ̂(ξ) = ∫ ψ(x) e^{-2πiξx} dx, and the wavelet transform consumes
conj(ψ̂(aξ)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidParameter, NoFiniteOrder, ProgressiveWaveletNoLimit

KINDS = ("morlet", "chirp", "cauchy", "gauss", "custom")

# Switch from the expm1 form to the direct difference once the exponent is large.
_EXPM1_LIMIT = 30.0


def cexpm1(z):
    """exp(z) - 1 for complex z, accurate near zero."""
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    em1 = np.expm1(x)
    re = em1 * np.cos(y) - 2.0 * np.sin(0.5 * y) ** 2
    im = np.exp(x) * np.sin(y)
    return re + 1j * im


def _morlet_hat(xi, xi0):
    xi = np.asarray(xi, dtype=float)
    k = math.pi ** -0.25
    arg = xi0 * xi
    with np.errstate(over="ignore", invalid="ignore"):
        small = k * np.exp(-0.5 * (xi ** 2 + xi0 ** 2)) * np.expm1(np.minimum(arg, _EXPM1_LIMIT))
        big = k * (np.exp(-0.5 * (xi - xi0) ** 2) - np.exp(-0.5 * (xi ** 2 + xi0 ** 2)))
    return np.where(arg <= _EXPM1_LIMIT, small, big).astype(complex)


def _chirp_hat(xi, xi0, beta):
    xi = np.asarray(xi, dtype=float)
    s = 1.0 - 1j * beta
    pre = np.sqrt(2 * np.pi / s) * np.exp(-xi0 ** 2 / (2 * s))
    z = xi0 * xi / s - xi ** 2 / (2 * s) + 0.5 * xi ** 2
    use_small = z.real <= _EXPM1_LIMIT
    zc = np.where(use_small, z, 0.0)
    small = pre * np.exp(-0.5 * xi ** 2) * cexpm1(zc)
    with np.errstate(over="ignore", invalid="ignore"):
        big = np.sqrt(2 * np.pi / s) * (np.exp(-(xi - xi0) ** 2 / (2 * s))
                                         - np.exp(-xi0 ** 2 / (2 * s)) * np.exp(-0.5 * xi ** 2))
    return np.where(use_small, small, big)


def _cauchy_hat(xi, p, rho):
    xi = np.asarray(xi, dtype=float)
    pos = xi > 0
    safe = np.where(pos, xi, 1.0)
    val = np.asarray(rho(safe), dtype=complex) * safe ** p * np.exp(-safe)
    return np.where(pos, val, 0.0)


@dataclass(frozen=True)
class Wavelet:
    """A wavelet given by its Fourier transform, times a complex ``gain``."""

    kind: str
    params: dict = field(default_factory=dict)
    progressive: bool = False
    gain: complex = 1.0
    func: Callable | None = field(default=None, compare=False, repr=False)

    def fourier_at(self, xi):
        scalar = np.isscalar(xi)
        xi = np.atleast_1d(np.asarray(xi, dtype=float))
        p = self.params
        if self.kind == "morlet":
            v = _morlet_hat(xi, p["xi0"])
        elif self.kind == "chirp":
            v = _chirp_hat(xi, p["xi0"], p["beta"])
        elif self.kind == "cauchy":
            rho = self.func if self.func is not None else (lambda x, k=p["rho_const"]: np.full(x.shape, k))
            v = _cauchy_hat(xi, p["p"], rho)
        elif self.kind == "gauss":
            v = np.exp(-np.pi * xi ** 2).astype(complex)
        else:
            v = np.asarray(self.func(xi), dtype=complex)
            if self.progressive:
                v = np.where(xi > 0, v, 0.0)
        if self.gain != 1.0:
            v = v * self.gain
        return complex(v[0]) if scalar else v

    __call__ = fourier_at

    def scaled(self, gain: complex) -> "Wavelet":
        return Wavelet(self.kind, dict(self.params), self.progressive,
                       complex(self.gain) * complex(gain), self.func)

    def dilated(self, s: float) -> "Wavelet":
        """Wavelet with transform ξ ↦ ψ̂(sξ)."""
        return custom(lambda xi, w=self, s=s: w.fourier_at(s * np.asarray(xi)),
                      progressive=self.progressive)

    def descriptor(self) -> dict:
        if self.kind == "custom" or (self.kind == "cauchy" and self.func is not None):
            raise InvalidParameter("custom wavelets have no serializable descriptor")
        d = {"kind": self.kind, **self.params}
        if self.gain != 1.0:
            d["gain"] = [self.gain.real, self.gain.imag]
        return d


def morlet(xi0: float) -> Wavelet:
    if xi0 == 0:
        raise InvalidParameter("Morlet center frequency must be nonzero")
    return Wavelet("morlet", {"xi0": float(xi0)})


def chirp(xi0: float, beta: float) -> Wavelet:
    return Wavelet("chirp", {"xi0": float(xi0), "beta": float(beta)})


def cauchy(p: float, rho: float | Callable = 1.0) -> Wavelet:
    """Cauchy wavelet ρ(ξ) ξ^p e^{-ξ} 1_{ξ>0}.

    ``rho`` is a nonzero constant or a callable. A callable must be bounded,
    nowhere zero and satisfy ρ(aξ) = ρ(ξ) for the scales in use; none of this
    is checked.
    """
    if not p > 0:
        raise InvalidParameter(f"Cauchy exponent must be positive, got {p}")
    if callable(rho):
        return Wavelet("cauchy", {"p": float(p)}, progressive=True, func=rho)
    if rho == 0:
        raise InvalidParameter("rho must be nonzero")
    return Wavelet("cauchy", {"p": float(p), "rho_const": float(rho)}, progressive=True)


def gauss_lowpass() -> Wavelet:
    return Wavelet("gauss")


def custom(fn: Callable, progressive: bool = False) -> Wavelet:
    return Wavelet("custom", {}, progressive=progressive, func=fn)


def from_descriptor(d: dict) -> Wavelet:
    kind = d.get("kind")
    try:
        if kind == "morlet":
            w = morlet(float(d["xi0"]))
        elif kind == "chirp":
            w = chirp(float(d["xi0"]), float(d["beta"]))
        elif kind == "cauchy":
            w = cauchy(float(d["p"]), float(d.get("rho_const", 1.0)))
        elif kind == "gauss":
            w = gauss_lowpass()
        else:
            raise InvalidParameter(f"unknown wavelet kind {kind!r}")
    except KeyError as e:
        raise InvalidParameter(f"wavelet descriptor missing field {e}") from None
    if "gain" in d:
        re, im = d["gain"]
        w = w.scaled(complex(re, im))
    return w


# moment probe -----------------------------------------------------------------

@dataclass(frozen=True)
class MomentProfile:
    ell: int
    c: complex
    fit_quality: float = 0.0


_SPREAD_TOL = 1e-3
_LADDER = 7


def _one_side(values, xs, ell):
    """Classify ξ^{-ℓ}ψ̂(ξ) along a geometric ladder.

    Returns (status, c, spread) with status in {'null', 'zero', 'limit', 'other'}.
    'null' means the transform vanishes identically on this side.
    """
    if np.all(values == 0):
        return "null", 0j, 0.0
    r = values / xs ** ell
    rich = 2.0 * r[1:] - r[:-1]  # first-order Richardson, ladder ratio 2
    c = rich[-1]
    scale = np.max(np.abs(r))
    if abs(c) <= _SPREAD_TOL * scale and abs(r[-1]) < abs(r[0]):
        return "zero", 0j, 0.0
    spread = float(np.max(np.abs(rich - c)) / abs(c))
    return ("limit" if spread < _SPREAD_TOL else "other"), complex(c), spread


def _probe_once(w, xi_probe, max_ell):
    ladder = xi_probe * 2.0 ** -np.arange(_LADDER)
    right = np.asarray(w.fourier_at(ladder))
    left = np.asarray(w.fourier_at(-ladder))
    for ell in range(max_ell + 1):
        sr, cr, qr = _one_side(right, ladder, ell)
        sl, cl, ql = _one_side(left, -ladder, ell)
        vanishing = ("null", "zero")
        if sr in vanishing and sl in vanishing:
            continue
        if sr in vanishing or sl in vanishing:
            raise ProgressiveWaveletNoLimit(
                f"one-sided limits of xi^-{ell} psi_hat disagree at 0 "
                f"(right: {sr}, left: {sl}); the transform is progressive-like")
        if sr == "limit" and sl == "limit":
            c = 0.5 * (cr + cl)
            gap = abs(cr - cl) / abs(c)
            if gap >= _SPREAD_TOL:
                raise ProgressiveWaveletNoLimit(
                    f"one-sided limits differ: {cr:.6g} vs {cl:.6g}")
            return MomentProfile(ell, complex(c), float(max(qr, ql, gap)))
        break
    raise NoFiniteOrder(f"no moment order <= {max_ell} gives a finite nonzero limit")


def probe_moment_order(w: Wavelet, xi_probe: float = 1e-3, max_ell: int = 4) -> MomentProfile:
    """Smallest ℓ with lim_{ξ→0} ξ^{-ℓ}ψ̂(ξ) = c ≠ 0, probed on both sides.

    The limit is estimated on the ladder ±xi_probe·2^{-j}, j = 0..6, by
    first-order Richardson extrapolation, and re-checked at half the probe
    scale.
    """
    if not 0 < xi_probe <= 1e-3:
        raise InvalidParameter("xi_probe must lie in (0, 1e-3]")
    if max_ell < 1:
        raise InvalidParameter("max_ell must be >= 1")
    prof = _probe_once(w, xi_probe, max_ell)
    half = _probe_once(w, 0.5 * xi_probe, max_ell)
    drift = abs(half.c - prof.c) / abs(prof.c)
    if half.ell != prof.ell or drift >= _SPREAD_TOL:
        raise NoFiniteOrder("moment limit is not stable under halving the probe scale")
    return MomentProfile(prof.ell, prof.c, max(prof.fit_quality, float(drift)))


def normalization_gain(profile: MomentProfile) -> complex:
    """(-1)^ℓ (2πi)^ℓ / c."""
    if profile.c == 0:
        raise InvalidParameter("moment limit c must be nonzero")
    return (-1) ** profile.ell * (2j * math.pi) ** profile.ell / profile.c


def normalize(w: Wavelet, profile: MomentProfile) -> Wavelet:
    """φ = ((-1)^ℓ (2πi)^ℓ / c) ψ, whose moment limit is (-1)^ℓ (2πi)^ℓ."""
    return w.scaled(normalization_gain(profile))
