"""Numerical integration primitives.

Two workhorses: a uniform-grid sum for periodic integrands (spectrally
accurate on smooth ones, used for all Fourier projections) and an adaptive
routine for integrands with integrable endpoint singularities (used for the
oscillator period and for antiderivatives).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate as _si


class QuadratureError(Exception):
    """Base class for quadrature failures."""


class EvaluationError(QuadratureError):
    """The integrand returned a non-finite value. Carries the node."""

    def __init__(self, node: float, value: float):
        self.node = float(node)
        self.value = value
        super().__init__(
            f"integrand returned non-finite value {value!r} at t = {node!r}"
        )


class ConvergenceError(QuadratureError):
    """Tolerance not met within the subdivision budget.

    ``best`` holds the best estimate reached before giving up.
    """

    def __init__(self, best: "QuadResult", message: str):
        self.best = best
        super().__init__(message)


@dataclass
class QuadResult:
    value: float
    error_estimate: float
    evaluations: int

    def __post_init__(self):
        if not self.error_estimate >= 0.0:
            raise ValueError("error_estimate must be non-negative")
        if self.evaluations < 1:
            raise ValueError("evaluations must be at least 1")


def sample_periodic(f: Callable[[float], float], period: float, n: int) -> np.ndarray:
    """Evaluate f at the n uniform nodes j*period/n, j = 0..n-1.

    Raises EvaluationError on the first non-finite value.
    """
    vals = np.empty(n)
    step = period / n
    for j in range(n):
        t = j * step
        v = float(f(t))
        if not math.isfinite(v):
            raise EvaluationError(t, v)
        vals[j] = v
    return vals


def periodic_trapezoid(f: Callable[[float], float], period: float, n: int) -> QuadResult:
    """Integrate a period-periodic function over one period.

    Uses the n-node uniform sum (period/n) * sum f(j*period/n), which is the
    trapezoid rule on a periodic integrand and converges spectrally for
    smooth ones. The error estimate compares against the half-resolution
    grid; it is zero (up to rounding) for band-limited integrands.
    """
    if not period > 0:
        raise ValueError("period must be positive")
    if n < 2:
        raise ValueError("need at least 2 nodes")
    vals = sample_periodic(f, period, n)
    value = period * float(vals.mean())
    if n % 2 == 0:
        half = period * float(vals[::2].mean())
        evaluations = n
    else:
        vhalf = sample_periodic(f, period, n // 2)
        half = period * float(vhalf.mean())
        evaluations = n + n // 2
    return QuadResult(value, abs(value - half), evaluations)


def adaptive_singular(
    f: Callable[[float], float], a: float, b: float, tol: float = 1e-10
) -> QuadResult:
    """Integrate f over (a, b) where f may blow up at either endpoint.

    Backed by globally adaptive bisection on interior Gauss-Kronrod nodes
    with series acceleration (QUADPACK's QAGS), so the endpoints are never
    evaluated and any integrable algebraic endpoint singularity converges
    without per-integral substitutions. The tolerance is absolute.

    Raises ConvergenceError, carrying the best estimate, when the
    subdivision budget runs out before tol is met, and EvaluationError if f
    returns a non-finite value at an interior node.
    """
    if not a < b:
        raise ValueError("need a < b")
    if not tol > 0:
        raise ValueError("tol must be positive")

    def g(x: float) -> float:
        v = float(f(x))
        if not math.isfinite(v):
            raise EvaluationError(x, v)
        return v

    out = _si.quad(g, a, b, epsabs=0.5 * tol, epsrel=0.0, limit=200, full_output=1)
    value, abserr, info = out[0], out[1], out[2]
    result = QuadResult(value, max(float(abserr), 0.0), int(info["neval"]))
    if abserr > tol:
        detail = out[3].strip() if len(out) > 3 else "estimated error above tolerance"
        raise ConvergenceError(
            result,
            f"quadrature did not reach tol={tol:g} "
            f"(best estimate {value!r} +- {abserr:.3g}): {detail}",
        )
    return result
