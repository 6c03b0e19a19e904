"""The Imani cosine and sine.

Ics(t) = sgn(cos psi) |cos psi|^{3/2} and Isn(t) = sqrt(3/2) sin psi solve
the constraint (2/3) y^2 + |x|^{4/3} = 1 identically for any phase psi from
`phase`. Ics is even and T-periodic with Ics(0) = 1; Isn is odd with
Isn(0) = 0. First derivatives exist in closed form and are continuous; the
second derivative of Ics diverges where cos psi = 0, which is why no second
derivative is offered here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .phase import ImaniParams, phase_eval
from .quadrature import adaptive_singular

SQRT_3_2 = np.sqrt(1.5)

_THIRD = 1.0 / 3.0
_TWO_THIRDS = 2.0 / 3.0
_FOUR_THIRDS = 4.0 / 3.0


@dataclass
class ImaniPair:
    """A sample (ics, isn) of the pair. Satisfies |ics| <= 1,
    |isn| <= sqrt(3/2) and (2/3) isn^2 + |ics|^{4/3} = 1 up to rounding."""

    ics: float
    isn: float


def sgn(t):
    """Sign function: +1 for positive, 0 at zero, -1 for negative."""
    s = np.sign(np.asarray(t, dtype=float))
    return float(s) if s.ndim == 0 else s


def real_pow(x, p: float):
    """Real-branch fractional powers used throughout this package.

    x^{1/3} is the odd real cube root sgn(x)|x|^{1/3}; x^{2/3} and x^{4/3}
    are the even powers |x|^{2/3} and |x|^{4/3}. Pass the exponent as the
    literal 1/3, 2/3 or 4/3; anything else is rejected so complex branches
    can never sneak in.
    """
    x = np.asarray(x, dtype=float)
    if p == _THIRD:
        r = np.cbrt(x)
    elif p == _TWO_THIRDS:
        r = np.abs(x) ** _TWO_THIRDS
    elif p == _FOUR_THIRDS:
        r = np.abs(x) ** _FOUR_THIRDS
    else:
        raise ValueError(f"unsupported exponent {p!r}; expected 1/3, 2/3 or 4/3")
    return float(r) if r.ndim == 0 else r


def imani_eval(params: ImaniParams, t) -> ImaniPair:
    """Evaluate (Ics, Isn) at t (scalar or ndarray)."""
    psi = phase_eval(params, t).psi
    c = np.cos(psi)
    ics = np.sign(c) * np.abs(c) ** 1.5
    isn = SQRT_3_2 * np.sin(psi)
    if np.ndim(ics) == 0:
        return ImaniPair(float(ics), float(isn))
    return ImaniPair(ics, isn)


def residual(params: ImaniParams, t):
    """Deviation (2/3) isn^2 + |ics|^{4/3} - 1 of the evaluated pair from the
    defining constraint.

    Recomputed from the published function values, not from the internal
    identity |cos psi|^2 + sin^2 psi = 1, so it genuinely tests the output.
    """
    pair = imani_eval(params, t)
    r = _TWO_THIRDS * pair.isn**2 + real_pow(pair.ics, _FOUR_THIRDS) - 1.0
    return float(r) if np.ndim(r) == 0 else r


def imani_derivatives(params: ImaniParams, t):
    """Analytic (dIcs/dt, dIsn/dt) by the chain rule:

        dIcs/dt = -(3/2) |cos psi|^{1/2} sin(psi) psi'
        dIsn/dt = sqrt(3/2) cos(psi) psi'

    Both are continuous in t: the sign and absolute-value branches of Ics
    join smoothly because the |cos psi|^{1/2} factor vanishes exactly where
    the sign flips.
    """
    pv = phase_eval(params, t)
    c = np.cos(pv.psi)
    s = np.sin(pv.psi)
    dics = -1.5 * np.sqrt(np.abs(c)) * s * pv.dpsi
    disn = SQRT_3_2 * c * pv.dpsi
    if np.ndim(dics) == 0:
        return float(dics), float(disn)
    return dics, disn


def imani_antiderivative(params: ImaniParams, which: str, t: float, tol: float = 1e-10) -> float:
    """Definite integral of Ics or Isn from 0 to t, by adaptive quadrature
    with absolute error at most tol.

    Both integrands have zero mean over a period, so full-period integrals
    vanish. Quadrature failures propagate as ConvergenceError.
    """
    if which not in ("ics", "isn"):
        raise ValueError(f"which must be 'ics' or 'isn', got {which!r}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    t = float(t)
    if t == 0.0:
        return 0.0

    if which == "ics":
        def g(u: float) -> float:
            return imani_eval(params, u).ics
    else:
        def g(u: float) -> float:
            return imani_eval(params, u).isn

    if t > 0:
        return adaptive_singular(g, 0.0, t, tol).value
    return -adaptive_singular(g, t, 0.0, tol).value
