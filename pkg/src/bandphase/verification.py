"""Numerical verification suites.

Each suite draws seeded instances, runs one family of checks and returns a
list of :class:`Check` records (measured value, tolerance, pass/fail). The
instance ``i`` of suite ``name`` uses ``default_rng([seed, tag, i])`` where
``tag`` is the suite's position in :data:`SUITES`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import asdict, dataclass

import numpy as np

from .corpus import random_analytic, random_real, rng_for, unit
from .cwt import measure, measure_complex, transform_grid
from .errors import AmbiguousSigns
from .oracles import psi_norm, transform_time
from .quadrature import QuadratureSpec, panels_for, split_rule
from .retrieval.cauchy import DISTINCT, EQUIVALENT, cauchy_discriminate, progressive_counterexample
from .retrieval.derivative import antidifferentiate
from .retrieval.pipeline import retrieve
from .retrieval.sign import sign_retrieve, sign_retrieve_oracle, wsk_interpolate
from .signals import (BandlimitedSignal, derivative, dist_up_to_sign, evaluate, fourier, hilbert,
                      inner, analytic_rep, l2_distance, norm)
from .wavelets import (Wavelet, cauchy, chirp, gauss_lowpass, morlet, normalize,
                       probe_moment_order)

SUITES = ("signals", "cwt", "limits", "retrieval", "counterexample", "cauchy")


@dataclass
class Check:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        d = asdict(self)
        d["value"] = float(d["value"]) if math.isfinite(d["value"]) else None
        return d

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark} {self.name}: {self.value:.3e} (tolerance {self.tolerance:.1e}) {self.detail}".rstrip()


def at_most(name, value, tol, detail="") -> Check:
    return Check(name, float(value), float(tol), bool(value <= tol), detail)


def at_least(name, value, tol, detail="") -> Check:
    return Check(name, float(value), float(tol), bool(value >= tol), detail)


def instance_rng(seed: int, suite: str, i: int) -> np.random.Generator:
    return rng_for([int(seed), SUITES.index(suite), int(i)])


def signal_window(f: BandlimitedSignal, margin: int = 64) -> tuple:
    """Measurement window on the m/(4Ω) grid covering ``f`` plus ``margin``."""
    return 4 * f.m_min - margin, 4 * f.m_max + margin


# reference values ---------------------------------------------------------------

def morlet_limit(xi0: float) -> complex:
    return complex(math.pi ** -0.25 * xi0 * math.exp(-0.5 * xi0 ** 2))


def chirp_limit(xi0: float, beta: float) -> complex:
    s = 1 - 1j * beta
    return cmath.sqrt(2 * math.pi) * s ** -1.5 * cmath.exp(-xi0 ** 2 / (2 * s)) * xi0


def shipped_wavelets() -> list:
    return [morlet(5.0), chirp(5.0, 1.0), cauchy(2.0), gauss_lowpass()]


# building blocks ------------------------------------------------------------------

def scale_limit_errors(f: BandlimitedSignal, phi: Wavelet, ell: int, scales,
                       q: QuadratureSpec | None = None) -> np.ndarray:
    """E(a) = ||f^(ℓ) − a^{-ℓ} W_φ f(·, a)||_2 for each scale, by Parseval."""
    q = q or QuadratureSpec()
    span = max(abs(f.m_min), abs(f.m_max)) * f.spacing
    xi, w = split_rule(f.omega, panels_for(q, f.omega, 2 * span), q)
    fh2 = np.abs(fourier(f, xi)) ** 2
    target = (2j * math.pi * xi) ** ell
    out = []
    for a in np.atleast_1d(scales):
        gap = np.abs(target - np.conj(phi.fourier_at(a * xi)) * a ** -ell) ** 2
        out.append(math.sqrt(max(0.0, float(np.sum(fh2 * gap * w)))))
    return np.array(out)


def spectral_energy(f: BandlimitedSignal, q: QuadratureSpec | None = None) -> float:
    """∫ |f̂(ξ)|² dξ over [-Ω, Ω] by quadrature of the closed-form spectrum."""
    q = q or QuadratureSpec()
    span = max(abs(f.m_min), abs(f.m_max)) * f.spacing
    xi, w = split_rule(f.omega, panels_for(q, f.omega, 2 * span), q)
    return float(np.sum(np.abs(fourier(f, xi)) ** 2 * w))


def two_route_gap(f, w, b, a) -> float:
    """|time route − frequency route| relative to ||f||·||ψ_a||."""
    from .cwt import transform
    return abs(transform_time(f, w, b, a) - transform(f, w, b, a)) / (norm(f) * psi_norm(w, a))


def finite_difference_gap(f: BandlimitedSignal, x, h: float = 1e-5) -> float:
    d = evaluate(derivative(f, 1), x)
    fd = (evaluate(f, x + h) - evaluate(f, x - h)) / (2 * h)
    return float(np.max(np.abs(d - fd)) / np.max(np.abs(d)))


def squared_samples(g: BandlimitedSignal, pad: int = 40):
    """(q at m/(4Ω), m_min) for q = g², on the signal window plus ``pad``."""
    m = np.arange(4 * g.m_min - pad, 4 * g.m_max + pad + 1)
    return evaluate(g, m / (4 * g.omega)).real ** 2, int(m[0])


def wsk_residual(f: BandlimitedSignal, w: Wavelet, a: float, margin: int = 64) -> float:
    """Largest gap, relative to max q, between q = |W_ψ f(·,a)|² and its WSK
    interpolant from the m/(4Ω) samples, at midpoints of the central half of
    the grid."""
    lo, hi = signal_window(f, margin)
    b = np.arange(lo, hi + 1) / (4 * f.omega)
    qs = np.abs(transform_grid(f, w, b, [a])[:, 0]) ** 2
    interp = wsk_interpolate(qs, f.omega, lo)
    quarter = (hi - lo) // 4
    mid = (np.arange(lo + quarter, hi - quarter) + 0.5) / (4 * f.omega)
    direct = np.abs(transform_grid(f, w, mid, [a])[:, 0]) ** 2
    return float(np.max(np.abs(interp(mid) - direct)) / np.max(qs))


# suites -------------------------------------------------------------------------

def suite_signals(seed: int, n: int = 5) -> list:
    checks = []
    parseval = sampling = hh = neg = fd = 0.0
    sampling_ok = True
    for i in range(n):
        rng = instance_rng(seed, "signals", i)
        f = random_real(rng, 5)
        e_coef = float(np.sum(np.abs(f.coeffs) ** 2)) * f.spacing
        e_spec = spectral_energy(f)
        parseval = max(parseval, abs(e_coef - e_spec) / e_coef)
        rebuilt = BandlimitedSignal(f.omega, evaluate(f, f.indices * f.spacing), f.m_min)
        sampling_ok &= bool(np.array_equal(rebuilt.coeffs, f.coeffs))
        hh = max(hh, l2_distance(hilbert(hilbert(f)), -f) / norm(f))
        fp = analytic_rep(f)
        xi, _ = split_rule(f.omega, 16, QuadratureSpec())
        neg = max(neg, float(np.max(np.abs(fourier(fp, xi[xi < 0])), initial=0.0)) / norm(f))
        x = rng.uniform(f.m_min * f.spacing, f.m_max * f.spacing, 10)
        fd = max(fd, finite_difference_gap(f, x))
    checks.append(at_most("signals.parseval", parseval, 1e-9))
    checks.append(Check("signals.sampling_consistency", sampling, 0.0, sampling_ok, "bitwise"))
    checks.append(at_most("signals.hilbert_hilbert_is_minus_identity", hh, 1e-9))
    checks.append(at_most("signals.analytic_rep_negative_frequencies", neg, 1e-9))
    checks.append(at_most("signals.derivative_vs_finite_difference", fd, 1e-6))
    return checks


def suite_cwt(seed: int, n: int = 2) -> list:
    checks = []
    for w in shipped_wavelets():
        worst = 0.0
        for i in range(n):
            rng = instance_rng(seed, "cwt", i)
            f = random_real(rng, 3)
            a = 2.0 ** rng.uniform(-1.0, 1.0)
            b = rng.uniform(f.m_min * f.spacing, f.m_max * f.spacing)
            worst = max(worst, two_route_gap(f, w, b, a))
        checks.append(at_most(f"cwt.two_route.{w.kind}", worst, 1e-6, f"{n} triples"))
    f = random_real(instance_rng(seed, "cwt", n), 5)
    w = morlet(5.0)
    win = signal_window(f)
    z = measure_complex(f, w, win, [0.5, 0.125])
    mneg = measure(-f, w, win, [0.5, 0.125])
    checks.append(Check("cwt.sign_invariance", float(np.max(np.abs(np.abs(z) - mneg.values))), 0.0,
                        bool(np.array_equal(np.abs(z), mneg.values)), "bitwise"))
    # row b -> W f(b, a) is in PW_Ω: Nyquist subgrid reproduces the finer grid
    row = z[:, 0]
    even = row[(np.arange(win[0], win[1] + 1) % 2) == 0]
    start = win[0] + (win[0] % 2)
    sub = BandlimitedSignal(f.omega, even, start // 2)
    odd_b = np.arange(win[0] + 1 - win[0] % 2, win[1] + 1, 2)
    keep = slice(len(odd_b) // 4, 3 * len(odd_b) // 4)
    odd_b = odd_b[keep]
    direct = row[odd_b - win[0]]
    gap = float(np.max(np.abs(evaluate(sub, odd_b / (4 * f.omega)) - direct)) / np.max(np.abs(row)))
    checks.append(at_most("cwt.row_bandlimited", gap, 1e-9))
    return checks


def suite_limits(seed: int, n: int = 3, scales=None) -> list:
    checks = []
    prof = probe_moment_order(morlet(5.0))
    ref = morlet_limit(5.0)
    checks.append(Check("limits.morlet_probe", abs(prof.c - ref) / abs(ref), 1e-3,
                        prof.ell == 1 and abs(prof.c - ref) <= 1e-3 * abs(ref), f"ell={prof.ell}"))
    prof_c = probe_moment_order(chirp(5.0, 1.0))
    ref_c = chirp_limit(5.0, 1.0)
    checks.append(Check("limits.chirp_probe", abs(prof_c.c - ref_c) / abs(ref_c), 1e-3,
                        prof_c.ell == 1 and abs(prof_c.c - ref_c) <= 1e-3 * abs(ref_c),
                        f"ell={prof_c.ell}"))
    phi = normalize(morlet(5.0), prof)
    scales = 2.0 ** -np.arange(4, 11) if scales is None else np.asarray(scales)
    monotone = True
    last = 0.0
    ladders = []
    for i in range(n):
        f = random_real(instance_rng(seed, "limits", i), 5)
        e = scale_limit_errors(f, phi, 1, scales) / norm(derivative(f, 1))
        ladders.append(e)
        monotone &= bool(np.all(np.diff(e) < 0))
        last = max(last, float(e[-1]))
    checks.append(Check("limits.E_decreasing", float(np.max([np.max(np.diff(e)) for e in ladders])),
                        0.0, monotone, "max step of E(a)/||f'||"))
    checks.append(at_most("limits.E_smallest_scale", last, 1e-3,
                          "E(a)/||f'|| ladder " + " ".join(f"{v:.2e}" for v in np.max(ladders, axis=0))))
    return checks


def suite_retrieval(seed: int, n_sign: int = 10, n_end: int = 2) -> list:
    checks = []
    worst = 0.0
    disagree = flagged = 0
    for i in range(n_sign):
        g = random_real(instance_rng(seed, "retrieval", i), 13)
        q, m0 = squared_samples(g)
        try:
            s = sign_retrieve(q, g.omega, m0)
            o = sign_retrieve_oracle(q, g.omega, m0)
        except AmbiguousSigns:
            flagged += 1
            continue
        worst = max(worst, dist_up_to_sign(s, g) / norm(g))
        disagree += dist_up_to_sign(s, o) > 1e-9 * norm(g)
    checks.append(at_most("retrieval.sign_distance", worst, 1e-6, f"{n_sign - flagged} unflagged"))
    checks.append(at_most("retrieval.sign_vs_oracle_disagreements", float(disagree), 0.0))
    scales = 2.0 ** -np.arange(4, 11)
    for w, tol in ((morlet(5.0), 1e-3), (gauss_lowpass(), 1e-4)):
        worst = 0.0
        for i in range(n_end):
            f = random_real(instance_rng(seed, "retrieval", 1000 + i), 3)
            rep = retrieve(measure(f, w, signal_window(f), scales), w)
            worst = max(worst, dist_up_to_sign(rep.candidate, f) / norm(f))
        checks.append(at_most(f"retrieval.end_to_end.{w.kind}", worst, tol, f"{n_end} signals"))
    worst = 0.0
    for i in range(n_sign):
        f = random_real(instance_rng(seed, "retrieval", 2000 + i), 5)
        for ell in (1, 2):
            worst = max(worst, l2_distance(antidifferentiate(derivative(f, ell), ell), f) / norm(f))
    checks.append(at_most("retrieval.antiderivative_round_trip", worst, 1e-6))
    return checks


def counterexample_instance(seed: int, i: int):
    rng = instance_rng(seed, "counterexample", i)
    g = random_real(rng, 5)
    alpha = rng.uniform(0.3, math.pi - 0.3)
    return g, alpha


def suite_counterexample(seed: int, n: int = 3, scales=(0.5, 1.0, 2.0)) -> list:
    w = cauchy(2.0)
    gap = 0.0
    sep = math.inf
    for i in range(n):
        g, alpha = counterexample_instance(seed, i)
        f = progressive_counterexample(g, alpha)
        win = signal_window(g)
        mf = measure(f, w, win, scales)
        mg = measure(g, w, win, scales)
        gap = max(gap, float(np.max(np.abs(mf.values - mg.values)) / np.max(mg.values)))
        sep = min(sep, dist_up_to_sign(f, g) / norm(g))
    return [at_most("counterexample.max_entrywise_gap", gap, 1e-8, f"{n} pairs"),
            at_least("counterexample.min_signal_distance", sep, 0.1)]


def orthogonal_unit(f: BandlimitedSignal, u: BandlimitedSignal) -> BandlimitedSignal:
    """u − <u, f>/<f, f> f, scaled to unit norm (same spectral factor as f)."""
    v = u - f * (inner(u, f) / inner(f, f))
    return v * (1.0 / norm(v))


def discrimination_pairs(seed: int, i: int):
    rng = instance_rng(seed, "cauchy", i)
    f = unit(random_analytic(rng, 5))
    alpha = rng.uniform(0.0, 2 * math.pi)
    rotated = f * cmath.exp(1j * alpha)
    u = orthogonal_unit(f, random_analytic(rng, 5))
    return f, rotated, f + u * 0.1


def suite_cauchy(seed: int, n: int = 3, a: float = 2.0, tol: float = 1e-4) -> list:
    w = cauchy(2.0)
    scales = [1.0, a]
    eq = dist = 0
    wsk = 0.0
    for i in range(n):
        f, rot, pert = discrimination_pairs(seed, i)
        win = signal_window(f)
        mf = measure(f, w, win, scales)
        eq += cauchy_discriminate(mf, measure(rot, w, win, scales), tol) == EQUIVALENT
        dist += cauchy_discriminate(mf, measure(pert, w, win, scales), tol) == DISTINCT
        wsk = max(wsk, *(wsk_residual(f, w, s) for s in scales))
    return [at_least("cauchy.rotations_equivalent", float(eq), float(n)),
            at_least("cauchy.perturbations_distinct", float(dist), float(n)),
            at_most("cauchy.squared_magnitude_wsk_residual", wsk, 1e-8)]


_RUNNERS = {
    "signals": suite_signals,
    "cwt": suite_cwt,
    "limits": suite_limits,
    "retrieval": suite_retrieval,
    "counterexample": suite_counterexample,
    "cauchy": suite_cauchy,
}


def run_suite(name: str, seed: int) -> list:
    names = SUITES if name == "all" else (name,)
    out = []
    for s in names:
        if s not in _RUNNERS:
            raise ValueError(f"unknown suite {s!r}")
        out.extend(_RUNNERS[s](seed))
    return out
