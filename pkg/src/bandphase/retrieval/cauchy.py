"""Progressive wavelets: the rotation counterexample, two-scale discrimination
and an alternating-projection reconstruction for analytic signals.

A progressive wavelet only sees positive frequencies, so every rotation
f = cos α · g − sin α · Hg (positive frequencies times e^{iα}) has the same
magnitudes as g. Two scales of a Cauchy wavelet do determine the positive
frequency part up to one global phase; the reconstruction below searches for
it numerically and is not guaranteed to find it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..cwt import MagnitudeMeasurements
from ..errors import GridMismatch, InvalidParameter, Stalled
from ..quadrature import QuadratureSpec, panels_for, rule
from ..signals import BandlimitedSignal, SpectralFactor, rotate_analytic
from ..wavelets import Wavelet
from .pipeline import RetrievalReport

EQUIVALENT = "equivalent"
DISTINCT = "distinct"

# Spectrum 2 ĝ 1_{ξ>0}: the analytic representation of the sinc series ĝ.
ANALYTIC = SpectralFactor((2.0,), (0.0,))


def progressive_counterexample(g: BandlimitedSignal, alpha: float) -> BandlimitedSignal:
    """cos α · g − sin α · Hg: real, with analytic representation e^{iα} g_+."""
    if not g.is_real:
        raise InvalidParameter("the counterexample is built from a real signal")
    return rotate_analytic(g, alpha)


def _descriptor(meas):
    return meas.wavelet


def cauchy_discriminate(meas_f: MagnitudeMeasurements, meas_g: MagnitudeMeasurements,
                        tol: float = 1e-4) -> str:
    """``'equivalent'`` iff the two magnitude grids agree entrywise within
    ``tol`` relative to the largest magnitude, else ``'distinct'``.

    With two scales of a Cauchy wavelet, agreement means the positive
    frequency parts agree up to a global phase.
    """
    if not meas_f.same_grid(meas_g):
        raise GridMismatch("measurement grids differ (band, window or scales)")
    if _descriptor(meas_f) != _descriptor(meas_g):
        raise GridMismatch("measurements were taken with different wavelets")
    if meas_f.scales.size < 2:
        raise InvalidParameter("two distinct scales are needed")
    top = max(float(np.max(meas_f.values, initial=0.0)), float(np.max(meas_g.values, initial=0.0)))
    gap = float(np.max(np.abs(meas_f.values - meas_g.values), initial=0.0))
    return EQUIVALENT if gap <= tol * max(top, np.finfo(float).tiny) else DISTINCT


# reconstruction ----------------------------------------------------------------

@dataclass(frozen=True)
class CauchyOptions:
    window: tuple | None = None   # Nyquist index range (m_lo, m_hi) of the model
    max_iter: int = 2000
    tol: float = 1e-6
    restarts: int = 20
    seed: int = 0
    reg: float = 1e-10
    stall_window: int = 100
    stall_tol: float = 1e-12
    quadrature: QuadratureSpec = QuadratureSpec()


def _model_window(meas, opts):
    if opts.window is not None:
        lo, hi = (int(v) for v in opts.window)
    else:
        lo, hi = math.ceil(meas.m_min / 2), math.floor(meas.m_max / 2)
    if hi < lo:
        raise InvalidParameter("empty model window")
    return lo, hi


def _system(meas: MagnitudeMeasurements, w: Wavelet, lo: int, hi: int, q: QuadratureSpec):
    """Matrix taking model coefficients to the stacked transform rows."""
    omega = meas.omega
    m = np.arange(lo, hi + 1)
    b = meas.times
    t = float(np.max(np.abs(b))) + max(abs(lo), abs(hi)) / (2 * omega)
    panels = panels_for(q, omega, t, minimum=math.ceil(4 * omega * float(np.max(meas.scales))))
    xi, wt = rule(0.0, omega, panels, q)
    basis = (2.0 / (2.0 * omega)) * np.exp(-1j * math.pi * np.outer(xi, m) / omega)
    phase = np.exp(2j * math.pi * np.outer(b, xi))
    blocks = [phase @ ((wt * np.conj(w.fourier_at(a * xi)))[:, None] * basis) for a in meas.scales]
    return np.concatenate(blocks, axis=0)


def _gauge(c: np.ndarray) -> np.ndarray:
    k = int(np.argmax(np.abs(c)))
    if c[k] == 0:
        return c
    out = c * (abs(c[k]) / c[k])
    out[k] = abs(c[k])
    return out


def _run(A, solve, mag, c, opts):
    ref = float(np.linalg.norm(mag)) or 1.0
    history = []
    for it in range(opts.max_iter + 1):
        y = A @ c
        r = float(np.linalg.norm(np.abs(y) - mag)) / ref
        history.append(r)
        if r < opts.tol:
            return c, r, it, "converged"
        if it == opts.max_iter:
            break
        if it >= opts.stall_window and history[-opts.stall_window - 1] - r < opts.stall_tol:
            return c, r, it, "stalled"
        ay = np.abs(y)
        z = np.where(ay > 0, mag * y / np.where(ay > 0, ay, 1.0), mag)
        c = solve @ z
    return c, r, it, "max_iter"


def cauchy_reconstruct(meas: MagnitudeMeasurements, w: Wavelet, opts: CauchyOptions | None = None,
                       init: BandlimitedSignal | None = None) -> RetrievalReport:
    """Analytic f with |W_ψ f| matching ``meas`` at two (or more) scales.

    The unknown is f = analytic_rep(Σ c_m sinc(2Ωx − m)) with complex c_m
    on ``opts.window``. Each iteration replaces the moduli of the transform
    rows by the measured ones, then solves a ridge-regularized least-squares
    problem for c. Restarts begin from the measured moduli with independent
    random phases, seeded from ``opts.seed``; the best residual wins, ties
    going to the lower restart index. With ``init`` a single run starts
    there. The candidate's phase is fixed by making its largest coefficient
    positive real.
    """
    opts = opts or CauchyOptions()
    if not w.progressive:
        raise InvalidParameter("reconstruction from two scales needs a progressive wavelet")
    if meas.scales.size < 2 or np.unique(meas.scales).size != meas.scales.size:
        raise InvalidParameter("need at least two distinct scales")
    lo, hi = _model_window(meas, opts)
    A = _system(meas, w, lo, hi, opts.quadrature)
    mag = meas.values.T.ravel()
    n = hi - lo + 1
    gram = A.conj().T @ A
    lam = opts.reg * float(np.real(np.trace(gram))) / n
    solve = np.linalg.solve(gram + lam * np.eye(n), A.conj().T)

    starts = []
    if init is not None:
        c0 = np.zeros(n, dtype=complex)
        for j, mm in enumerate(init.indices):
            if lo <= mm <= hi:
                c0[mm - lo] = init.coeffs[j]
        starts.append(c0)
    else:
        for child in np.random.SeedSequence(opts.seed).spawn(opts.restarts):
            rng = np.random.default_rng(child)
            starts.append(solve @ (mag * np.exp(2j * math.pi * rng.random(mag.size))))

    runs = [_run(A, solve, mag, c0, opts) for c0 in starts]
    best = min(range(len(runs)), key=lambda i: (runs[i][1], i))
    c, resid, iters, status = runs[best]
    cand = BandlimitedSignal(meas.omega, _gauge(c), lo, ANALYTIC)
    sv = np.linalg.svd(A, compute_uv=False)
    report = RetrievalReport(
        cand, resid, 0,
        diagnostics={"restart": float(best), "condition": float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf,
                     "restarts": float(len(runs)),
                     "converged_restarts": float(sum(r[3] == "converged" for r in runs))},
        flags=[] if status == "converged" else [status],
        converged=status == "converged", iterations=iters)
    if status != "converged" and all(r[3] == "stalled" for r in runs):
        raise Stalled(f"all {len(runs)} runs stalled; best residual {resid:.3e}", report=report)
    return report
