"""Run configuration: one JSON document plus command-line overrides."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import InvalidParameter
from .quadrature import QuadratureSpec
from .signals import TAU_COEF, TAU_IM, TAU_QUAD, TAU_TRUNC

DEFAULT_TOLERANCES = {
    "tau_quad": TAU_QUAD,
    "tau_im": TAU_IM,
    "tau_coef": TAU_COEF,
    "tau_trunc": TAU_TRUNC,
    "eps_zero": 1e-10,
    "tau_neg": 1e-6,
    "tau_dc": 1e-3,
    "convergence": 0.1,
}

# Grid points of m/(4Ω) added on each side of the signal window by default.
WINDOW_MARGIN = 64
DEFAULT_SEED = 20240101


def geometric_scales(a0: float, ratio: float, count: int) -> np.ndarray:
    if a0 <= 0 or ratio <= 0 or ratio == 1 or count < 1:
        raise InvalidParameter("geometric scales need a0 > 0, ratio > 0, ratio != 1, count >= 1")
    return a0 * ratio ** np.arange(count)


def _scales_from(spec) -> np.ndarray:
    if isinstance(spec, dict):
        try:
            return geometric_scales(float(spec["a0"]), float(spec["ratio"]), int(spec["count"]))
        except KeyError as e:
            raise InvalidParameter(f"geometric scales missing {e}") from None
    arr = np.asarray(spec, dtype=float).ravel()
    if arr.size == 0 or np.any(arr <= 0):
        raise InvalidParameter("scales must be a nonempty list of positive numbers")
    return arr


@dataclass(frozen=True)
class RunConfig:
    omega: float = 1.0
    window: tuple | None = None
    scales: object = field(default_factory=lambda: {"a0": 2.0 ** -4, "ratio": 0.5, "count": 7})
    wavelet: dict = field(default_factory=lambda: {"kind": "morlet", "xi0": 5.0})
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    tolerances: dict = field(default_factory=dict)
    seed: int = DEFAULT_SEED
    n_coeffs: int = 3

    def __post_init__(self):
        if not (self.omega > 0 and math.isfinite(self.omega)):
            raise InvalidParameter("omega must be positive")
        if self.window is not None:
            lo, hi = (int(v) for v in self.window)
            if hi < lo:
                raise InvalidParameter("window must satisfy m_min <= m_max")
            object.__setattr__(self, "window", (lo, hi))
        for k, v in self.tolerances.items():
            if k not in DEFAULT_TOLERANCES:
                raise InvalidParameter(f"unknown tolerance {k!r}")
            if not float(v) > 0:
                raise InvalidParameter(f"tolerance {k} must be positive")
        if not 0 <= int(self.seed) < 2 ** 64:
            raise InvalidParameter("seed must be an unsigned 64-bit integer")
        if self.n_coeffs < 1:
            raise InvalidParameter("n_coeffs must be positive")
        _scales_from(self.scales)

    def scale_array(self) -> np.ndarray:
        return _scales_from(self.scales)

    def tol(self, name: str) -> float:
        return float(self.tolerances.get(name, DEFAULT_TOLERANCES[name]))

    def with_overrides(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    @classmethod
    def from_dict(cls, d: dict) -> "RunConfig":
        known = {"omega", "window", "scales", "wavelet", "quadrature", "tolerances", "seed", "n_coeffs"}
        extra = set(d) - known
        if extra:
            raise InvalidParameter(f"unknown config keys: {sorted(extra)}")
        kw = dict(d)
        if "quadrature" in kw:
            kw["quadrature"] = QuadratureSpec.from_dict(kw["quadrature"])
        if "window" in kw and kw["window"] is not None:
            kw["window"] = tuple(kw["window"])
        return cls(**kw)

    @classmethod
    def load(cls, path) -> "RunConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as e:
                raise InvalidParameter(f"config is not valid JSON: {e}") from None
        if not isinstance(doc, dict):
            raise InvalidParameter("config must be a JSON object")
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        return {"omega": self.omega, "window": list(self.window) if self.window else None,
                "scales": self.scales if isinstance(self.scales, dict) else list(map(float, self.scales)),
                "wavelet": dict(self.wavelet), "quadrature": self.quadrature.to_dict(),
                "tolerances": dict(self.tolerances), "seed": int(self.seed),
                "n_coeffs": int(self.n_coeffs)}
