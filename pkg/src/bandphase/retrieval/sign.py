"""Sign retrieval: a real g ∈ PW_Ω from samples of q = g² at m/(4Ω).

q lies in PW_{2Ω}, so its samples at spacing 1/(4Ω) determine it. The root
|g| = sqrt(q) is known everywhere; what is lost is the sign on each interval
between zeros. The correct sign pattern is the one whose signed root lies in
PW_Ω, so patterns are scored by the energy the signed root leaves outside the
Nyquist sinc model of band Ω.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ..errors import AmbiguousSigns, EdgeLeakage, InvalidParameter, TooManyIntervals
from ..signals import BandlimitedSignal, evaluate, sinc

EDGE_TOL = 1e-6
AMBIGUITY_GAP = 1e-2
EQUIV_TOL = 1e-6  # relative L2 size of a pattern difference counted as "same candidate"

_GOLDEN = 0.5 * (math.sqrt(5.0) - 1.0)
_ZERO_DEPTH = 1e-6  # a local minimum this far below its cluster's peak is a zero
_NOISE = 1e-14      # rounding level of the interpolated q, relative to its maximum


@dataclass(frozen=True)
class SignPattern:
    breakpoints: tuple
    signs: tuple
    objective: float

    def __post_init__(self):
        if len(self.signs) != len(self.breakpoints) + 1:
            raise InvalidParameter("need one sign per interval")
        if self.signs and self.signs[0] != 1:
            raise InvalidParameter("first interval sign is fixed to +1")


@dataclass(frozen=True)
class SignOptions:
    eps_zero: float = 1e-10
    fine: int = 16
    tau_neg: float = 1e-6
    check_edges: bool = True


def _q_signal(q_samples, omega, m_min, check_edges=True):
    q = np.asarray(q_samples, dtype=float).ravel()
    top = float(np.max(np.abs(q), initial=0.0))
    if check_edges and q.size and top > 0 and max(abs(q[0]), abs(q[-1])) > EDGE_TOL * top:
        raise EdgeLeakage(
            f"edge samples {abs(q[0]):.3e}, {abs(q[-1]):.3e} exceed {EDGE_TOL:g} x max {top:.3e}; "
            "widen the measurement window")
    return BandlimitedSignal(2.0 * omega, q, m_min)


def wsk_interpolate(samples, omega: float, m_min: int = 0, check_edges: bool = True):
    """Cardinal series x ↦ Σ s_m sinc(4Ωx − m) through samples at m/(4Ω).

    ``omega`` is the band of the underlying real signal; the series itself
    has band 2Ω.
    """
    sig = _q_signal(samples, omega, m_min, check_edges)
    real = bool(np.all(sig.coeffs.imag == 0))

    def interpolant(x):
        v = evaluate(sig, x)
        return v.real if real else v

    return interpolant


# problem setup --------------------------------------------------------------------

@dataclass
class _Setup:
    omega: float
    m_min: int
    q: np.ndarray          # clipped samples at m/(4Ω)
    x: np.ndarray          # fine grid
    r: np.ndarray          # sqrt(q) on the fine grid
    breaks: np.ndarray
    label: np.ndarray      # interval index of each fine point
    gram: np.ndarray       # objective(σ) = σᵀ gram σ
    energy: np.ndarray     # ||r||² per interval
    interp: object
    unresolved: float      # ||r||² where q is below the zero threshold

    @property
    def k(self):
        return len(self.breaks) + 1

    def objective(self, sigma):
        sigma = np.asarray(sigma, dtype=float)
        return float(max(0.0, sigma @ self.gram @ sigma))

    def same_candidate(self, s1, s2) -> bool:
        tot = float(np.sum(self.energy))
        diff = np.asarray(s1) != np.asarray(s2)
        d = 4.0 * min(float(np.sum(self.energy[diff])), float(np.sum(self.energy[~diff])))
        # signs inside zero clusters are not determined by the data
        return d <= max((EQUIV_TOL ** 2) * tot, 4.0 * self.unresolved)


def _golden_min(fn, lo, hi, iters=50):
    """Vectorized golden-section minimization on brackets [lo, hi]."""
    a, b = lo.copy(), hi.copy()
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = fn(c), fn(d)
    for _ in range(iters):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        new_c = b - _GOLDEN * (b - a)
        new_d = a + _GOLDEN * (b - a)
        c2 = np.where(left, new_c, d)
        d2 = np.where(left, c, new_d)
        fc2 = np.where(left, np.nan, fd)
        fd2 = np.where(left, fc, np.nan)
        need_c = np.isnan(fc2)
        need_d = np.isnan(fd2)
        if need_c.any():
            fc2[need_c] = fn(c2[need_c])
        if need_d.any():
            fd2[need_d] = fn(d2[need_d])
        c, d, fc, fd = c2, d2, fc2, fd2
    xm = 0.5 * (a + b)
    return xm, fn(xm)


def _cluster_zeros(x, qf, interp, s, e, anchors, noise):
    """Sign-change candidates inside the zero cluster x[s..e].

    Anchors are the cluster's outer neighbours and the Nyquist samples in it
    that are still above the rounding level. Between consecutive anchors the
    deepest point of q is kept when it is a genuine zero, so crossings that
    separate nonzero samples are not merged away. A cluster with no anchors
    inside always yields its deepest point.
    """
    n = x.size
    inner = [int(t) for t in np.flatnonzero(anchors[s:e + 1]) + s]
    bounds = ([s - 1] if s > 0 else []) + inner + ([e + 1] if e < n - 1 else [])
    if s > 0 and e < n - 1 and not inner:
        j = s + int(np.argmin(qf[s:e + 1]))
        xm, _ = _golden_min(interp, x[[max(j - 1, 0)]], x[[min(j + 1, n - 1)]])
        return [float(xm[0])]
    left, right = [], []
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        if hi - lo >= 2:
            j = lo + 1 + int(np.argmin(qf[lo + 1:hi]))
            lo, hi = j - 1, j + 1
        left.append(lo)
        right.append(hi)
    if not left:
        return []
    xm, qm = _golden_min(interp, x[left], x[right])
    floor = _ZERO_DEPTH * float(np.max(qf[s:e + 1])) + noise
    return [float(v) for v in xm[qm <= floor]]


def _breakpoints(x, qf, interp, thr, anchors, noise):
    """Sign-change candidates of q on the fine grid, one or more per zero cluster."""
    n = x.size
    low = qf < thr
    # local minima between grid points can dip below the threshold unseen
    j = np.arange(1, n - 1)
    cand = j[(qf[j] <= qf[j - 1]) & (qf[j] <= qf[j + 1]) & (qf[j] < 1e-3 * np.max(qf)) & ~low[j]]
    hits = {}
    if cand.size:
        xm, qm = _golden_min(interp, x[cand - 1], x[cand + 1])
        for jj, xx, qq in zip(cand, xm, qm):
            if qq < thr:
                low[jj] = True
                hits[int(jj)] = float(xx)
    breaks = []
    i = 0
    while i < n:
        if not low[i]:
            i += 1
            continue
        s = i
        while i + 1 < n and low[i + 1]:
            i += 1
        e = i
        i += 1
        if s == 0 and e == n - 1:
            continue
        inside = [hits[t] for t in range(s, e + 1) if t in hits]
        if inside:
            breaks.append(inside[int(np.argmin([interp(np.array([v]))[0] for v in inside]))])
        else:
            breaks.extend(_cluster_zeros(x, qf, interp, s, e, anchors, noise))
    return np.array(sorted(breaks), dtype=float)


def _setup(q_samples, omega, m_min, opts: SignOptions) -> _Setup:
    if not omega > 0:
        raise InvalidParameter("omega must be positive")
    q = np.asarray(q_samples, dtype=float).ravel()
    top = float(np.max(q, initial=0.0))
    if np.any(q < -opts.tau_neg * max(top, 1.0)):
        raise InvalidParameter("squared-magnitude samples are significantly negative")
    q = np.clip(q, 0.0, None)
    interp = wsk_interpolate(q, omega, m_min, opts.check_edges)
    h = 1.0 / (4.0 * omega)
    x = (m_min + np.arange((q.size - 1) * opts.fine + 1) / opts.fine) * h
    qf = np.clip(interp(x), 0.0, None)
    r = np.sqrt(qf)
    thr = opts.eps_zero * max(top, np.finfo(float).tiny)
    # Nyquist samples n/(2Ω) = 2n/(4Ω) that still carry sign information
    m = m_min + np.arange(q.size)
    anchors = np.zeros(x.size, dtype=bool)
    keep = (m % 2 == 0) & (q > _NOISE * top)
    anchors[(m[keep] - m_min) * opts.fine] = True
    breaks = _breakpoints(x, qf, lambda t: np.clip(interp(t), 0.0, None), thr, anchors,
                          _NOISE * top) if top > 0 else np.empty(0)
    label = np.searchsorted(breaks, x)
    k = breaks.size + 1
    dx = h / opts.fine

    # orthogonal complement of the Nyquist sinc model of band omega
    n = np.arange(math.floor(2 * omega * x[0]) - 1, math.ceil(2 * omega * x[-1]) + 2)
    phi = sinc(2 * omega * x[:, None] - n[None, :])
    Q, _ = np.linalg.qr(phi)
    cols = np.zeros((x.size, k))
    cols[np.arange(x.size), label] = r
    B = cols - Q @ (Q.T @ cols)
    gram = (B.T @ B) * dx
    energy = np.sum(cols ** 2, axis=0) * dx
    unresolved = float(np.sum(qf[qf < thr])) * dx
    return _Setup(omega, m_min, q, x, r, breaks, label, gram, energy, interp, unresolved)


def _zero_parity(setup: _Setup, xb: float) -> int:
    """Parity of the order of vanishing of |g| at a breakpoint, from the
    growth of sqrt(q) over two step sizes on each side."""
    h = 2.0 / (4.0 * setup.omega * 16)
    pts = np.array([xb - 2 * h, xb - h, xb + h, xb + 2 * h])
    r = np.sqrt(np.clip(setup.interp(pts), 0.0, None))
    orders = []
    for near, far in ((r[1], r[0]), (r[2], r[3])):
        if near > 0 and far > 0:
            orders.append(math.log2(far / near))
    if not orders:
        return 1
    return int(round(float(np.mean(orders)))) % 2


def _heuristic(setup: _Setup) -> np.ndarray:
    sigma = np.ones(setup.k)
    for i, xb in enumerate(setup.breaks):
        sigma[i + 1] = -sigma[i] if _zero_parity(setup, xb) else sigma[i]
    return sigma


def _moves(k):
    """Single-interval flips and suffix flips (flip across one breakpoint)."""
    for i in range(1, k):
        m = np.ones(k)
        m[i] = -1
        yield m
        if i < k - 1:
            m = np.ones(k)
            m[i:] = -1
            yield m


def _local_search(setup: _Setup, sigma: np.ndarray) -> np.ndarray:
    best = setup.objective(sigma)
    improved = True
    while improved:
        improved = False
        for mv in _moves(setup.k):
            cand = sigma * mv
            val = setup.objective(cand)
            if val < best:
                best, sigma, improved = val, cand, True
    return sigma


def _candidate(setup: _Setup, sigma) -> BandlimitedSignal:
    """Signed root sampled at the Nyquist points n/(2Ω) = 2n/(4Ω)."""
    m_max = setup.m_min + setup.q.size - 1
    n_lo = math.ceil(setup.m_min / 2)
    n_hi = math.floor(m_max / 2)
    n = np.arange(n_lo, n_hi + 1)
    xs = n / (2.0 * setup.omega)
    lab = np.searchsorted(setup.breaks, xs)
    vals = np.asarray(sigma)[lab] * np.sqrt(setup.q[2 * n - setup.m_min])
    return BandlimitedSignal(setup.omega, vals, int(n_lo))


def _pattern(setup, sigma) -> SignPattern:
    return SignPattern(tuple(float(b) for b in setup.breaks),
                       tuple(int(s) for s in sigma), setup.objective(sigma))


def _finish(setup, sigma, runner_up):
    obj = setup.objective(sigma)
    pattern = _pattern(setup, sigma)
    cand = _candidate(setup, sigma)
    object.__setattr__(cand, "info", {"pattern": pattern, "objective": obj})
    if runner_up is not None:
        obj2, sigma2 = runner_up
        if obj2 - obj < max(AMBIGUITY_GAP * obj2, setup.unresolved):
            raise AmbiguousSigns(
                f"sign patterns {pattern.signs} and {tuple(int(s) for s in sigma2)} have "
                f"objectives {obj:.3e} and {obj2:.3e}",
                candidates=(cand, _candidate(setup, sigma2)))
    return cand


def sign_retrieve(q_samples, omega: float, m_min: int = 0,
                  opts: SignOptions | None = None) -> BandlimitedSignal:
    """Recover real g ∈ PW_Ω, up to global sign, from q = g² at m/(4Ω).

    Breakpoints sit at zeros of q inside its zero clusters (below
    ``eps_zero·max q``): the deepest point of an empty cluster, and every
    genuine zero separating Nyquist samples that are still above rounding
    level. Interval signs start from the parity of the zero order at each
    breakpoint and are improved by single-flip and suffix-flip descent on the
    out-of-band energy of the signed root. Patterns that differ only inside
    zero clusters count as the same candidate. The first interval is +1.
    The returned signal carries ``info['pattern']``.
    """
    opts = opts or SignOptions()
    setup = _setup(q_samples, omega, m_min, opts)
    sigma = _local_search(setup, _heuristic(setup))
    runner = None
    for mv in _moves(setup.k):
        alt = sigma * mv
        if setup.same_candidate(alt, sigma):
            continue
        val = setup.objective(alt)
        if runner is None or val < runner[0]:
            runner = (val, alt)
    return _finish(setup, sigma, runner)


def sign_retrieve_oracle(q_samples, omega: float, m_min: int = 0,
                         max_intervals: int = 15,
                         opts: SignOptions | None = None) -> BandlimitedSignal:
    """Exhaustive search over all 2^(k-1) sign patterns."""
    opts = opts or SignOptions()
    setup = _setup(q_samples, omega, m_min, opts)
    k = setup.k
    if k > max_intervals:
        raise TooManyIntervals(f"{k} intervals exceed the limit of {max_intervals}")
    pats = np.array([(1,) + p for p in itertools.product((1, -1), repeat=k - 1)], dtype=float)
    objs = np.einsum("pi,ij,pj->p", pats, setup.gram, pats)
    order = np.argsort(objs, kind="stable")
    best = pats[order[0]]
    runner = None
    for idx in order[1:]:
        if not setup.same_candidate(pats[idx], best):
            runner = (float(max(objs[idx], 0.0)), pats[idx])
            break
    return _finish(setup, best, runner)


def count_zero_clusters(q_samples, omega, m_min=0, eps_zero=1e-10) -> int:
    return _setup(q_samples, omega, m_min, SignOptions(eps_zero=eps_zero)).breaks.size
