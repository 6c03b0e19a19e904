"""Quadrature primitives: periodic trapezoid sums and singular adaptive rule."""

import math

import numpy as np
import pytest

from imani.quadrature import (
    ConvergenceError,
    EvaluationError,
    QuadResult,
    adaptive_singular,
    periodic_trapezoid,
    sample_periodic,
)

# Independent high-precision value of int_0^1 (1 - x^{4/3})^{-1/2} dx,
# frozen from mpmath: (3/4) * beta(3/4, 1/2).
QUARTER_INTEGRAL = 1.7972103521033884


class TestPeriodicTrapezoid:
    def test_band_limited_sin_squared(self):
        q = periodic_trapezoid(lambda t: math.sin(t) ** 2, 2 * math.pi, 64)
        assert abs(q.value - math.pi) <= 1e-12
        assert q.evaluations == 64

    def test_constant(self):
        q = periodic_trapezoid(lambda t: 1.0, 5.0, 2)
        assert q.value == pytest.approx(5.0, abs=1e-14)

    def test_odd_symmetric_integrand_vanishes(self):
        f = lambda t: math.copysign(abs(math.cos(t)) ** 1.5, math.cos(t))
        q = periodic_trapezoid(f, 2 * math.pi, 4096)
        assert abs(q.value) <= 1e-10

    def test_odd_node_count_recomputes_half_grid(self):
        q = periodic_trapezoid(lambda t: math.exp(math.sin(t)), 2 * math.pi, 9)
        assert q.evaluations == 9 + 4
        assert q.error_estimate > 0

    def test_error_estimate_brackets_smooth_convergence(self):
        f = lambda t: math.exp(math.sin(t))
        ref = periodic_trapezoid(f, 2 * math.pi, 1 << 14).value
        coarse = periodic_trapezoid(f, 2 * math.pi, 16)
        fine = periodic_trapezoid(f, 2 * math.pi, 32)
        assert abs(fine.value - ref) <= abs(coarse.value - ref) + 1e-15
        assert abs(fine.value - ref) <= coarse.error_estimate + 1e-15

    def test_linearity(self):
        rng = np.random.default_rng(7)
        period = 3.7
        w = 2 * math.pi / period
        for _ in range(5):
            c1, c2, c3 = rng.uniform(-1, 1, 3)
            d1, d2 = rng.uniform(-1, 1, 2)
            alpha, beta = rng.uniform(-3, 3, 2)
            f = lambda t: c1 + c2 * math.sin(w * t) + c3 * math.cos(2 * w * t)
            g = lambda t: d1 * math.cos(w * t) + d2 * math.sin(3 * w * t)
            h = lambda t: alpha * f(t) + beta * g(t)
            qf = periodic_trapezoid(f, period, 64)
            qg = periodic_trapezoid(g, period, 64)
            qh = periodic_trapezoid(h, period, 64)
            budget = qh.error_estimate + abs(alpha) * qf.error_estimate \
                + abs(beta) * qg.error_estimate + 1e-12
            assert abs(qh.value - alpha * qf.value - beta * qg.value) <= budget

    def test_nonfinite_value_identifies_node(self):
        def f(t):
            return 1.0 / (t - 0.5) if t != 0.5 else float("inf")

        with pytest.raises(EvaluationError) as exc:
            periodic_trapezoid(f, 1.0, 4)
        assert exc.value.node == pytest.approx(0.5)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            periodic_trapezoid(lambda t: 1.0, -1.0, 8)
        with pytest.raises(ValueError):
            periodic_trapezoid(lambda t: 1.0, 1.0, 1)


class TestAdaptiveSingular:
    def test_inverse_sqrt_endpoint(self):
        q = adaptive_singular(lambda x: 1.0 / math.sqrt(1.0 - x), 0.0, 1.0, 1e-10)
        assert abs(q.value - 2.0) <= 1e-10
        assert q.error_estimate <= 1e-10
        assert q.evaluations >= 21

    def test_constant(self):
        q = adaptive_singular(lambda x: 1.0, 0.0, 1.0, 1e-10)
        assert q.value == pytest.approx(1.0, abs=1e-12)

    def test_quarter_period_integrand_matches_beta_identity(self):
        f = lambda x: (1.0 - x ** (4.0 / 3.0)) ** -0.5
        q = adaptive_singular(f, 0.0, 1.0, 1e-10)
        assert abs(q.value - QUARTER_INTEGRAL) <= 1e-10

    def test_frozen_beta_value_against_gamma_oracle(self):
        mp = pytest.importorskip("mpmath")
        mp.mp.dps = 30
        oracle = float(mp.mpf(3) / 4 * mp.beta(mp.mpf(3) / 4, mp.mpf(1) / 2))
        assert oracle == pytest.approx(QUARTER_INTEGRAL, rel=1e-15)

    def test_polynomial_closed_form(self):
        q = adaptive_singular(lambda x: 3 * x * x + 1.0, -1.0, 2.0, 1e-10)
        # antiderivative x^3 + x
        assert abs(q.value - ((8 + 2) - (-1 - 1))) <= 1e-10

    def test_singularities_at_both_endpoints(self):
        f = lambda x: 1.0 / math.sqrt(x * (1.0 - x))
        q = adaptive_singular(f, 0.0, 1.0, 1e-9)
        assert abs(q.value - math.pi) <= 1e-9

    def test_divergent_integrand_fails_with_best_estimate(self):
        with pytest.raises(ConvergenceError) as exc:
            adaptive_singular(lambda x: 1.0 / x, 0.0, 1.0, 1e-10)
        assert isinstance(exc.value.best, QuadResult)
        assert exc.value.best.error_estimate > 1e-10

    def test_nonfinite_interior_value(self):
        def f(x):
            return float("nan") if 0.4 < x < 0.6 else 1.0

        with pytest.raises(EvaluationError):
            adaptive_singular(f, 0.0, 1.0, 1e-10)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            adaptive_singular(lambda x: 1.0, 1.0, 0.0, 1e-10)
        with pytest.raises(ValueError):
            adaptive_singular(lambda x: 1.0, 0.0, 1.0, 0.0)


class TestQuadResult:
    def test_invariants(self):
        with pytest.raises(ValueError):
            QuadResult(1.0, -1e-3, 10)
        with pytest.raises(ValueError):
            QuadResult(1.0, 0.0, 0)


def test_sample_periodic_layout():
    vals = sample_periodic(lambda t: t, 8.0, 4)
    assert np.allclose(vals, [0.0, 2.0, 4.0, 6.0])
