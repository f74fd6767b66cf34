"""Composite quadrature rules on bounded frequency intervals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidParameter

RULES = ("gauss-legendre-composite", "trapezoid")

# Largest phase (radians) a single panel may be asked to resolve.
_PHASE_PER_PANEL = 8.0


@dataclass(frozen=True)
class QuadratureSpec:
    """Frequency integration rule.

    ``num_nodes`` is the number of nodes per panel for Gauss-Legendre and the
    total number of points per panel for the trapezoid rule. ``panels`` is a
    lower bound; callers raise it to track the oscillation of the integrand.
    ``level`` counts refinements: each one doubles the final panel count.
    """

    num_nodes: int = 32
    rule: str = "gauss-legendre-composite"
    panels: int = 8
    level: int = 0

    def __post_init__(self):
        if self.num_nodes < 16:
            raise InvalidParameter(f"num_nodes must be >= 16, got {self.num_nodes}")
        if self.rule not in RULES:
            raise InvalidParameter(f"unknown quadrature rule {self.rule!r}")
        if self.panels < 1:
            raise InvalidParameter("panels must be positive")
        if self.level < 0:
            raise InvalidParameter("refinement level must be nonnegative")

    def refined(self) -> "QuadratureSpec":
        return QuadratureSpec(self.num_nodes, self.rule, self.panels, self.level + 1)

    def to_dict(self) -> dict:
        return {"num_nodes": self.num_nodes, "rule": self.rule, "panels": self.panels}

    @classmethod
    def from_dict(cls, d: dict) -> "QuadratureSpec":
        return cls(int(d.get("num_nodes", 32)), str(d.get("rule", RULES[0])),
                   int(d.get("panels", 8)))


@lru_cache(maxsize=32)
def _legendre(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def panels_for(spec: QuadratureSpec, length: float, max_freq: float, minimum: int = 1) -> int:
    """Panel count for ``[lo, lo+length]`` when the integrand contains
    ``exp(i * 2*pi * t * xi)`` with ``|t| <= max_freq``, at least
    ``minimum``, doubled once per refinement level."""
    phase = 2.0 * math.pi * abs(max_freq) * length
    base = max(spec.panels, int(minimum), int(math.ceil(phase / _PHASE_PER_PANEL)))
    return base << spec.level


def rule(lo: float, hi: float, panels: int, spec: QuadratureSpec):
    """Nodes and weights of the composite rule on ``[lo, hi]``."""
    edges = np.linspace(lo, hi, panels + 1)
    if spec.rule == "trapezoid":
        n = panels * spec.num_nodes
        x = np.linspace(lo, hi, n + 1)
        w = np.full(n + 1, (hi - lo) / n)
        w[0] *= 0.5
        w[-1] *= 0.5
        return x, w
    t, wt = _legendre(spec.num_nodes)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    x = (mid[:, None] + half[:, None] * t[None, :]).ravel()
    w = (half[:, None] * wt[None, :]).ravel()
    return x, w


def split_rule(omega: float, panels: int, spec: QuadratureSpec, positive_only: bool = False):
    """Rule on ``[-omega, omega]`` split at zero, so that piecewise-smooth
    spectra (sign multipliers, indicators) are integrated without a kink
    inside a panel."""
    xp, wp = rule(0.0, omega, panels, spec)
    if positive_only:
        return xp, wp
    xn, wn = rule(-omega, 0.0, panels, spec)
    return np.concatenate([xn, xp]), np.concatenate([wn, wp])
