"""Fourier analysis of periodic signals by trapezoid projection.

On a uniform grid the trapezoid rule integrates trigonometric polynomials
exactly and converges spectrally for smooth periodic integrands, so plain
projection sums are accurate far beyond their order and the code stays
trivially auditable. Harmonic counts here are small (K <= ~64); no fast
transform is warranted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quadrature import sample_periodic

TWO_PI = 2.0 * np.pi


@dataclass
class Spectrum:
    """Cosine/sine coefficients of a T-periodic signal up to harmonic K.

    cos_coeffs[0] is the mean; sin_coeffs[0] is identically zero so both
    arrays share indexing by harmonic k. tail_energy is the mean power of
    the signal not captured by the partial sum (clamped at zero, since
    rounding can produce tiny negatives).
    """

    period: float
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray
    tail_energy: float

    def __post_init__(self):
        if not self.period > 0:
            raise ValueError("period must be positive")
        if not self.tail_energy >= 0:
            raise ValueError("tail_energy must be non-negative")
        self.cos_coeffs = np.asarray(self.cos_coeffs, dtype=float)
        self.sin_coeffs = np.asarray(self.sin_coeffs, dtype=float)
        if self.cos_coeffs.shape != self.sin_coeffs.shape:
            raise ValueError("coefficient arrays must have equal length")
        if self.cos_coeffs.size < 1:
            raise ValueError("need at least the mean coefficient")

    @property
    def order(self) -> int:
        return self.cos_coeffs.size - 1


def analyze(f: Callable[[float], float], period: float, K: int, n: int | None = None) -> Spectrum:
    """Project f onto harmonics 0..K of the given period.

    Samples f once on n uniform nodes (default max(4K+4, 4096), and at least
    4K+4 so every harmonic is alias-safe), then takes trapezoid projections
    for every coefficient. Non-finite samples raise EvaluationError.
    """
    if not period > 0:
        raise ValueError("period must be positive")
    if K < 0:
        raise ValueError("K must be non-negative")
    if n is None:
        n = max(4 * K + 4, 4096)
    if n < 4 * K + 4:
        raise ValueError(f"need n >= 4K+4 = {4 * K + 4} samples, got {n}")

    vals = sample_periodic(f, period, n)
    theta = (TWO_PI / n) * np.arange(n)
    a0 = float(vals.mean())
    ks = np.arange(1, K + 1)
    phases = np.outer(ks, theta)
    cos_k = (2.0 / n) * (np.cos(phases) @ vals)
    sin_k = (2.0 / n) * (np.sin(phases) @ vals)

    power = float((vals * vals).mean())
    captured = a0 * a0 + 0.5 * float(cos_k @ cos_k + sin_k @ sin_k)
    tail = max(power - captured, 0.0)

    return Spectrum(
        period=float(period),
        cos_coeffs=np.concatenate([[a0], cos_k]),
        sin_coeffs=np.concatenate([[0.0], sin_k]),
        tail_energy=tail,
    )


def synthesize(spec: Spectrum, t):
    """Partial-sum reconstruction at t (scalar or ndarray)."""
    t = np.asarray(t, dtype=float)
    w = TWO_PI / spec.period
    out = np.full(t.shape, spec.cos_coeffs[0])
    for k in range(1, spec.cos_coeffs.size):
        arg = (w * k) * t
        out = out + spec.cos_coeffs[k] * np.cos(arg) + spec.sin_coeffs[k] * np.sin(arg)
    return float(out) if out.ndim == 0 else out


def odd_harmonic_defect(spec: Spectrum) -> float:
    """Largest coefficient a pure odd-harmonic cosine series would not have:
    the mean, the even-harmonic cosines (k >= 2) and every sine coefficient.

    Zero (up to the projection's own accuracy) for signals of the form
    sum_k a_k cos((2k+1) w t).
    """
    worst = abs(float(spec.cos_coeffs[0]))
    if spec.order >= 2:
        worst = max(worst, float(np.abs(spec.cos_coeffs[2::2]).max()))
    if spec.order >= 1:
        worst = max(worst, float(np.abs(spec.sin_coeffs[1:]).max()))
    return worst
