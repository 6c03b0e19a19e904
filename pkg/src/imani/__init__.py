"""Imani periodic functions and the Leah cube-root oscillator.

The family Ics/Isn solves the constraint (2/3) y^2 + |x|^{4/3} = 1 for any
phase psi(t) = A(t) + (2 pi / T) t with odd, T-periodic modulation A. The
package evaluates the family, integrates the oscillator whose (1, 0) orbit
lives on the same constraint, and provides the quadrature, spectral and
phase-extraction machinery to study both.
"""

from .fourier import Spectrum, analyze, odd_harmonic_defect, synthesize
from .functions import (
    ImaniPair,
    imani_antiderivative,
    imani_derivatives,
    imani_eval,
    real_pow,
    residual,
    sgn,
)
from .leah import (
    IntegrationError,
    NotASolutionError,
    OscState,
    Trajectory,
    UndersampledError,
    check_solution,
    extract_phase,
    generalized_flow,
    hamiltonian,
    integrate_leah,
    leah_period,
    leah_period_result,
    trajectory_from_samples,
    zero_crossing_period,
)
from .phase import ImaniParams, PhaseValue, check_phase_laws, is_monotone, phase_eval
from .quadrature import (
    ConvergenceError,
    EvaluationError,
    QuadratureError,
    QuadResult,
    adaptive_singular,
    periodic_trapezoid,
    sample_periodic,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "EvaluationError",
    "ImaniPair",
    "ImaniParams",
    "IntegrationError",
    "NotASolutionError",
    "OscState",
    "PhaseValue",
    "QuadResult",
    "QuadratureError",
    "Spectrum",
    "Trajectory",
    "UndersampledError",
    "adaptive_singular",
    "analyze",
    "check_phase_laws",
    "check_solution",
    "extract_phase",
    "generalized_flow",
    "hamiltonian",
    "imani_antiderivative",
    "imani_derivatives",
    "imani_eval",
    "integrate_leah",
    "is_monotone",
    "leah_period",
    "leah_period_result",
    "odd_harmonic_defect",
    "periodic_trapezoid",
    "phase_eval",
    "real_pow",
    "residual",
    "sample_periodic",
    "sgn",
    "synthesize",
    "trajectory_from_samples",
    "zero_crossing_period",
]
