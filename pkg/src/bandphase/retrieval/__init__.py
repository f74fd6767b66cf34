"""Reconstruction from magnitude data."""

from .cauchy import (DISTINCT, EQUIVALENT, CauchyOptions, cauchy_discriminate, cauchy_reconstruct,
                     progressive_counterexample)
from .derivative import (antidifferentiate, estimate_derivative_magnitudes,
                         estimate_derivative_magnitudes_full)
from .pipeline import RetrievalReport, RetrieveOptions, measurement_residual, retrieve
from .sign import SignOptions, SignPattern, sign_retrieve, sign_retrieve_oracle, wsk_interpolate

__all__ = [
    "DISTINCT", "EQUIVALENT", "CauchyOptions", "RetrievalReport", "RetrieveOptions", "SignOptions",
    "SignPattern", "antidifferentiate", "cauchy_discriminate", "cauchy_reconstruct",
    "estimate_derivative_magnitudes", "estimate_derivative_magnitudes_full",
    "measurement_residual", "progressive_counterexample", "retrieve", "sign_retrieve",
    "sign_retrieve_oracle", "wsk_interpolate",
]
