"""Phase functions psi(t) = A(t) + (2 pi / T) t.

A(t) is an odd, T-periodic sine series, so psi is odd and winds by exactly
2 pi per period: psi(t + T) = psi(t) + 2 pi. Every member of the Imani
family is defined by such a phase.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ImaniParams:
    """Period T and sine coefficients a_k (k = 1..K) of the modulation
    A(t) = sum_k a_k sin(2 pi k t / T).

    An empty coefficient tuple means A = 0, i.e. pure linear phase.
    Indexing starts at k = 1: there is no constant term, which makes A odd
    by construction.
    """

    period: float
    coeffs: tuple = ()

    def __post_init__(self):
        period = float(self.period)
        if not (np.isfinite(period) and period > 0):
            raise ValueError(f"period must be positive and finite, got {self.period!r}")
        coeffs = tuple(float(c) for c in self.coeffs)
        if not all(np.isfinite(c) for c in coeffs):
            raise ValueError("coefficients must be finite")
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "coeffs", coeffs)


@dataclass
class PhaseValue:
    """psi and its time derivative at a point (or on an array of points)."""

    psi: float
    dpsi: float


def phase_eval(params: ImaniParams, t) -> PhaseValue:
    """Evaluate psi(t) and psi'(t). t may be a scalar or an ndarray.

    Direct summation of the sine series; K is small in practice so no
    recurrence tricks are warranted.
    """
    t = np.asarray(t, dtype=float)
    w = TWO_PI / params.period
    psi = w * t
    dpsi = np.full(t.shape, w)
    for k, a in enumerate(params.coeffs, start=1):
        arg = (w * k) * t
        psi = psi + a * np.sin(arg)
        dpsi = dpsi + (a * w * k) * np.cos(arg)
    if t.ndim == 0:
        return PhaseValue(float(psi), float(dpsi))
    return PhaseValue(psi, dpsi)


def check_phase_laws(params: ImaniParams, grid_size: int) -> float:
    """Max violation of the two structural laws of psi on a uniform grid:
    oddness |psi(-t) + psi(t)| and winding |psi(t+T) - psi(t) - 2 pi|.

    Both hold by construction, so the return value measures rounding only.
    """
    if grid_size < 8:
        raise ValueError("grid_size must be at least 8")
    t = np.linspace(0.0, params.period, grid_size)
    fwd = phase_eval(params, t).psi
    bwd = phase_eval(params, -t).psi
    shifted = phase_eval(params, t + params.period).psi
    odd = np.abs(bwd + fwd).max()
    wind = np.abs(shifted - fwd - TWO_PI).max()
    return float(max(odd, wind))


def is_monotone(params: ImaniParams) -> tuple[bool, float]:
    """Whether psi is strictly increasing, with the minimum of psi' over one
    period (dense 2049-point scan). Large coefficients can make psi fold
    back, which is legal but makes phase plots non-injective.
    """
    t = np.linspace(0.0, params.period, 2049)
    d = phase_eval(params, t).dpsi
    lo = float(d.min())
    return lo > 0.0, lo
