"""Derivative magnitudes from small-scale measurements, and the inverse of
differentiation on PW_Ω ∩ L².

For a wavelet with moment order ℓ and limit c,

    a^{-ℓ} W_ψ f(b, a) · (-1)^ℓ (2πi)^ℓ / c  →  f^(ℓ)(b)   as a → 0+,

and the correction is a power series in a, so |·|² is extrapolated to a = 0
by a polynomial fit through the smallest scales.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from ..cwt import MagnitudeMeasurements
from ..errors import DCObstruction, InvalidParameter, NotConverging, QuadratureTooCoarse
from ..quadrature import QuadratureSpec, panels_for, rule
from ..signals import TAU_QUAD, TAU_TRUNC, BandlimitedSignal, TruncationWarning, fourier
from ..wavelets import MomentProfile

CONVERGENCE_TOL = 0.1


@dataclass
class DerivativeEstimate:
    """Extrapolated |f^(ℓ)(m/4Ω)|² together with fit diagnostics."""

    values: np.ndarray
    spread: float
    last_step: float
    order: int


def _scale_weights(meas: MagnitudeMeasurements, profile: MomentProfile) -> tuple:
    if profile.c == 0:
        raise InvalidParameter("moment limit must be nonzero")
    order = np.argsort(meas.scales)[::-1]
    a = meas.scales[order]
    gain = (2.0 * math.pi) ** profile.ell / abs(profile.c)
    y = (meas.values[:, order] * gain * a[None, :] ** (-profile.ell)) ** 2
    return a, y


def estimate_derivative_magnitudes_full(meas: MagnitudeMeasurements, profile: MomentProfile,
                                        order: int = 2,
                                        tol: float = CONVERGENCE_TOL) -> DerivativeEstimate:
    """Like :func:`estimate_derivative_magnitudes` but also returns the
    extrapolation spread and the relative change between the two smallest
    scales."""
    if order < 0:
        raise InvalidParameter("extrapolation order must be nonnegative")
    if meas.scales.size < max(3, order + 1):
        raise InvalidParameter(f"need at least {max(3, order + 1)} scales, got {meas.scales.size}")
    a, y = _scale_weights(meas, profile)
    top = float(np.max(np.abs(y[:, -1]), initial=0.0))
    if top == 0.0:
        return DerivativeEstimate(np.zeros(y.shape[0]), 0.0, 0.0, order)
    step = float(np.max(np.abs(y[:, -1] - y[:, -2])) / top)
    if step > tol:
        raise NotConverging(
            f"the two smallest scales differ by {step:.3g} relative (limit {tol:g}); "
            "use smaller scales")
    # Interpolating polynomial through the order+1 smallest scales, read at a = 0.
    ak = a[-(order + 1):]
    vand = np.vander(ak, order + 1, increasing=True)
    coef = np.linalg.solve(vand, y[:, -(order + 1):].T)
    est = np.clip(coef[0], 0.0, None)
    spread = float(np.max(np.abs(est - y[:, -1])) / top)
    return DerivativeEstimate(est, spread, step, order)


def estimate_derivative_magnitudes(meas: MagnitudeMeasurements, profile: MomentProfile,
                                   order: int = 2, tol: float = CONVERGENCE_TOL) -> np.ndarray:
    """|f^(ℓ)(m/4Ω)|² for each row of ``meas``, by polynomial extrapolation
    in the scale of the normalized squared magnitudes. Clipped at zero."""
    return estimate_derivative_magnitudes_full(meas, profile, order, tol).values


# antiderivative ------------------------------------------------------------------

XI_CUT = 1e-3
TAU_DC = 1e-3
_LADDER = 7
_FLANK = 8


def _dc_check(h: BandlimitedSignal, ell: int, xi_cut: float, scale: float, tau_dc: float):
    ladder = xi_cut * 2.0 ** -np.arange(_LADDER)
    for side in (1.0, -1.0):
        r = np.abs(fourier(h, side * ladder)) / ladder ** ell
        if r[-1] > max(16.0 * r[0], tau_dc * scale):
            raise DCObstruction(
                f"|h_hat(xi)| / |xi|^{ell} grows from {r[0]:.3e} to {r[-1]:.3e} toward xi = 0; "
                f"h does not look like an order-{ell} derivative")


def _ratio(h, ell, xi):
    return fourier(h, xi) / (2j * math.pi * xi) ** ell


def _nodes(omega, xi_cut, t_max, q: QuadratureSpec):
    outer = panels_for(q, omega, t_max)
    parts = [rule(-omega, -xi_cut, outer, q), rule(-xi_cut, xi_cut, panels_for(q, 2 * xi_cut, t_max, minimum=1), q), rule(xi_cut, omega, outer, q)]
    return np.concatenate([p[0] for p in parts]), np.concatenate([p[1] for p in parts])


def _spectrum(h, ell, xi, xi_cut):
    """ĥ/(2πiξ)^ℓ with the removable singularity patched by a quadratic fit
    through the flanks xi_cut..3·xi_cut on both sides."""
    out = np.empty(xi.shape, dtype=complex)
    inner = np.abs(xi) < xi_cut
    out[~inner] = _ratio(h, ell, xi[~inner])
    flank = xi_cut * np.linspace(1.0, 3.0, _FLANK)
    fx = np.concatenate([-flank[::-1], flank])
    fy = _ratio(h, ell, fx)
    vand = np.vander(fx, 3, increasing=True)
    coef, *_ = np.linalg.lstsq(vand, fy, rcond=None)
    out[inner] = np.vander(xi[inner], 3, increasing=True) @ coef
    fit_resid = float(np.max(np.abs(vand @ coef - fy)))
    return out, fit_resid


def antidifferentiate(h: BandlimitedSignal, ell: int, xi_cut: float | None = None,
                      pad: int | None = None, q: QuadratureSpec | None = None,
                      tau_dc: float = TAU_DC, tau_trunc: float = TAU_TRUNC,
                      tau_quad: float = TAU_QUAD) -> BandlimitedSignal:
    """The unique f ∈ PW_Ω ∩ L² with f^(ℓ) = h.

    f̂(ξ) = ĥ(ξ)/(2πiξ)^ℓ away from the origin; inside ``|ξ| < xi_cut``
    (default Ω·10⁻³) the ratio is replaced by a quadratic fitted on the
    flanks. Nyquist samples are computed by frequency quadrature on a window
    widened by ``pad`` coefficients per side (default twice the input length).
    ``info`` records ``dc_fill_residual`` and ``truncation``.
    """
    if ell < 0:
        raise InvalidParameter("order must be nonnegative")
    if ell == 0:
        return h
    q = q or QuadratureSpec()
    omega = h.omega
    xi_cut = omega * 1e-3 if xi_cut is None else float(xi_cut)
    if not 0 < xi_cut < omega / 3:
        raise InvalidParameter("xi_cut must lie in (0, omega/3)")
    if pad is None:
        pad = 2 * len(h.coeffs)
    n = np.arange(h.m_min - 2 * pad, h.m_max + 2 * pad + 1)
    x = n * h.spacing
    t_max = float(np.max(np.abs(x))) + max(abs(h.m_min), abs(h.m_max)) * h.spacing

    def samples(spec):
        xi, w = _nodes(omega, xi_cut, t_max, spec)
        vals, fit = _spectrum(h, ell, xi, xi_cut)
        return np.exp(2j * math.pi * np.outer(x, xi)) @ (vals * w), vals, xi, fit

    s, vals, xi, fit = samples(q)
    s2 = samples(q.refined())[0]
    scale = float(np.max(np.abs(vals[np.abs(xi) >= xi_cut]), initial=0.0))
    _dc_check(h, ell, xi_cut, scale * (2 * math.pi) ** ell, tau_dc)
    top = float(np.max(np.abs(s2), initial=0.0))
    if np.max(np.abs(s - s2), initial=0.0) > tau_quad * max(top, np.finfo(float).tiny):
        raise QuadratureTooCoarse("antiderivative samples changed under panel doubling")
    if h.is_real:
        s = s.real
    keep = slice(pad, len(n) - pad)
    tail = math.sqrt(h.spacing * float(np.sum(np.abs(s[:pad]) ** 2) + np.sum(np.abs(s[len(n) - pad:]) ** 2)))
    out = BandlimitedSignal(omega, s[keep], int(n[pad]))
    fn = float(np.linalg.norm(s) * math.sqrt(h.spacing))
    if tail > tau_trunc * fn:
        warnings.warn(f"antiderivative window drops about {tail:.3e} of L2 mass (||f|| = {fn:.3e})",
                      TruncationWarning, stacklevel=2)
    object.__setattr__(out, "info", {"dc_fill_residual": fit / max(scale, np.finfo(float).tiny),
                                     "truncation": tail})
    return out
