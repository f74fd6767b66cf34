"""Wavelet transform of bandlimited signals by frequency quadrature.

    W_ψ f(b, a) = ∫_{-Ω}^{Ω} f̂(ξ) conj(ψ̂(aξ)) e^{2πibξ} dξ
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (InvalidParameter, NoFiniteOrder, ProgressiveWaveletNoLimit,
                     QuadratureTooCoarse)
from .quadrature import QuadratureSpec, panels_for, split_rule
from .signals import TAU_QUAD, BandlimitedSignal, fourier
from .wavelets import Wavelet, probe_moment_order

_CHUNK = 1 << 21


@dataclass(frozen=True, eq=False)
class MagnitudeMeasurements:
    """|W_ψ f(m/4Ω, a_k)| for m = m_min..m_max; ``values[i, k]`` is row m_min+i."""

    omega: float
    m_min: int
    scales: np.ndarray
    values: np.ndarray
    wavelet: dict | None = None
    ell: int | None = None
    phases: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        s = np.array(self.scales, dtype=float).ravel()
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or v.shape[1] != s.size:
            raise InvalidParameter(f"values shape {v.shape} does not match {s.size} scales")
        if np.any(s <= 0):
            raise InvalidParameter("scales must be positive")
        if np.any(v < 0):
            raise InvalidParameter("magnitudes must be nonnegative")
        for a in (s, v):
            a.flags.writeable = False
        object.__setattr__(self, "scales", s)
        object.__setattr__(self, "values", v)

    @property
    def m_max(self) -> int:
        return self.m_min + self.values.shape[0] - 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(self.m_min, self.m_max + 1)

    @property
    def times(self) -> np.ndarray:
        return self.indices / (4.0 * self.omega)

    def scaled(self, s: float) -> "MagnitudeMeasurements":
        return MagnitudeMeasurements(self.omega, self.m_min, self.scales, s * self.values,
                                     self.wavelet, self.ell)

    def same_grid(self, other: "MagnitudeMeasurements") -> bool:
        return (self.omega == other.omega and self.m_min == other.m_min
                and self.values.shape == other.values.shape
                and np.array_equal(self.scales, other.scales))


def _nodes(f: BandlimitedSignal, w: Wavelet, b, scales, q: QuadratureSpec):
    d = float(np.max(np.abs(b), initial=0.0)) + max(abs(f.m_min), abs(f.m_max)) * f.spacing
    panels = panels_for(q, f.omega, d, minimum=math.ceil(4 * f.omega * float(np.max(scales))))
    return split_rule(f.omega, panels, q, positive_only=w.progressive)


def _grid(f, w, b, scales, q):
    xi, wt = _nodes(f, w, b, scales, q)
    spec = fourier(f, xi) * wt
    out = np.empty((b.size, scales.size), dtype=complex)
    kern = np.stack([spec * np.conj(w.fourier_at(a * xi)) for a in scales], axis=1)
    step = max(1, _CHUNK // max(1, xi.size))
    for s in range(0, b.size, step):
        out[s:s + step] = np.exp(2j * np.pi * np.outer(b[s:s + step], xi)) @ kern
    return out


def transform_grid(f: BandlimitedSignal, w: Wavelet, b, scales, q: QuadratureSpec | None = None,
                   tau_quad: float = TAU_QUAD, check: bool = True) -> np.ndarray:
    """W_ψ f(b_i, a_k) as an array of shape (len(b), len(scales)).

    With ``check`` the computation is repeated with doubled panels and
    :class:`QuadratureTooCoarse` is raised if any scale column moves by more
    than ``tau_quad`` relative to its largest entry.
    """
    q = q or QuadratureSpec()
    b = np.atleast_1d(np.asarray(b, dtype=float))
    scales = np.atleast_1d(np.asarray(scales, dtype=float))
    if np.any(scales <= 0):
        raise InvalidParameter("scales must be positive")
    out = _grid(f, w, b, scales, q)
    if check and b.size:
        fine = _grid(f, w, b, scales, q.refined())
        ref = np.max(np.abs(fine), axis=0)
        gap = np.max(np.abs(out - fine), axis=0)
        bad = gap > tau_quad * np.maximum(ref, np.finfo(float).tiny)
        if np.any(bad & (ref > 0)):
            k = int(np.argmax(bad))
            raise QuadratureTooCoarse(
                f"panel doubling moved scale a={scales[k]:g} by {gap[k]:.3e} (max {ref[k]:.3e})")
    return out


def transform(f, w, b, a, q: QuadratureSpec | None = None, tau_quad: float = TAU_QUAD) -> complex:
    if not a > 0:
        raise InvalidParameter("scale must be positive")
    return complex(transform_grid(f, w, [b], [a], q, tau_quad)[0, 0])


def _window(time_window):
    m_min, m_max = (int(v) for v in time_window)
    if m_max < m_min:
        raise InvalidParameter("empty time window")
    return m_min, m_max


def measure_complex(f, w, time_window, scales, q: QuadratureSpec | None = None,
                    tau_quad: float = TAU_QUAD) -> np.ndarray:
    m_min, m_max = _window(time_window)
    b = np.arange(m_min, m_max + 1) / (4.0 * f.omega)
    return transform_grid(f, w, b, scales, q, tau_quad)


def _ell_of(w: Wavelet):
    try:
        return probe_moment_order(w).ell
    except (ProgressiveWaveletNoLimit, NoFiniteOrder):
        return None


def measure(f, w, time_window, scales, q: QuadratureSpec | None = None,
            tau_quad: float = TAU_QUAD, keep_phase: bool = False) -> MagnitudeMeasurements:
    """Magnitudes on the grid m/(4Ω), m in ``time_window`` (inclusive)."""
    vals = measure_complex(f, w, time_window, scales, q, tau_quad)
    try:
        desc = w.descriptor()
    except InvalidParameter:
        desc = None
    return MagnitudeMeasurements(f.omega, _window(time_window)[0], scales, np.abs(vals), desc,
                                 _ell_of(w), vals if keep_phase else None)
