"""Moment flow: right-hand side, integrator, closed forms, structure."""

import math

import pytest

from qplancherel.dynamics import (
    IntegrationAccuracyError,
    closed_form,
    integrate_moments,
    limit_moments,
    limit_sigma,
    ode_rhs,
    polynomial_structure_residual,
)
from qplancherel.moments import h_moments, p_moments, transition_measure
from qplancherel.qmeasure import QParam


class TestOdeRhs:
    def test_first_equation(self):
        assert ode_rhs((1.0,)) == (1.0,)

    def test_second_equation(self):
        # y_2' = 2 y_1^2 + 2 y_2
        assert ode_rhs((1.0, 1.0)) == (1.0, 4.0)

    def test_third_equation(self):
        # y_3' = (3/2) y_1^3 + (9/2) y_1 y_2 + 3 y_3
        out = ode_rhs((1.0, 1.0, 1.0))
        assert out[:2] == (1.0, 4.0)
        assert out[2] == pytest.approx(9.0, rel=1e-15)

    def test_fourth_equation_general_point(self):
        a, b, c, d = 1.3, 0.7, -0.4, 2.1
        expected = (
            (2.0 / 3.0) * a**4
            + 4 * a * a * b
            + (16.0 / 3.0) * a * c
            + 2 * b * b
            + 4 * d
        )
        assert ode_rhs((a, b, c, d))[3] == pytest.approx(expected, rel=1e-13)


class TestIntegrator:
    def test_zero_time_is_identity(self):
        state = integrate_moments((1.0, 1.0), 0.0)
        assert state.y == (1.0, 1.0)
        assert state.sigma == 0.0

    def test_single_moment_exponential(self):
        state = integrate_moments((1.0,), 1.0)
        assert state.y[0] == pytest.approx(math.e, rel=1e-8)

    def test_second_moment_half_time(self):
        # y_2(1/2) = (1 + 2 * 1/2) e^1 = 2e from all-ones
        state = integrate_moments((1.0, 1.0), 0.5)
        assert state.y[1] == pytest.approx(2.0 * math.e, rel=1e-7)

    def test_matches_closed_forms_on_range(self):
        y0 = (1.0, 1.0, 1.0, 1.0)
        for sigma in (0.25, 0.5, 1.0, 1.5, 2.0):
            state = integrate_moments(y0, sigma, steps=1000)
            for n in range(1, 5):
                exact = closed_form(n, sigma, y0)
                assert state.y[n - 1] == pytest.approx(exact, rel=1e-7)

    def test_nonuniform_initial_values(self):
        y0 = (0.8, 1.4, 0.3, 2.0)
        state = integrate_moments(y0, 1.2, steps=2000)
        for n in range(1, 5):
            exact = closed_form(n, 1.2, y0)
            assert state.y[n - 1] == pytest.approx(exact, rel=1e-8)

    def test_too_few_steps_flagged(self):
        with pytest.raises(IntegrationAccuracyError):
            integrate_moments((1.0,) * 4, 2.0, steps=2)

    def test_step_count_validation(self):
        with pytest.raises(ValueError):
            integrate_moments((1.0,), 1.0, steps=0)

    def test_error_estimate_reported(self):
        state = integrate_moments((1.0, 1.0), 1.0, steps=500)
        assert 0.0 < state.error_estimate < 1e-6


class TestClosedForm:
    def test_zero_time_returns_initial(self):
        assert closed_form(1, 0.0, (3.7,)) == 3.7
        assert closed_form(4, 0.0, (1.0, 2.0, 3.0, 4.0)) == pytest.approx(4.0)

    def test_third_moment_at_one(self):
        # from all-ones: (1 + 6 + 4.5) e^3
        assert closed_form(3, 1.0, (1.0, 1.0, 1.0)) == pytest.approx(
            11.5 * math.e**3, rel=1e-14
        )

    def test_taylor_consistency_fourth(self):
        y0 = (1.0, 1.0, 1.0, 1.0)
        for sigma in (1e-3, 2e-3):
            state = integrate_moments(y0, sigma, steps=50)
            assert closed_form(4, sigma, y0) == pytest.approx(
                state.y[3], rel=1e-12
            )

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            closed_form(5, 0.1, (1.0,) * 5)
        with pytest.raises(ValueError):
            closed_form(0, 0.1, (1.0,))

    def test_short_initial_vector(self):
        with pytest.raises(ValueError):
            closed_form(3, 0.1, (1.0, 1.0))


class TestPolynomialStructure:
    @pytest.mark.parametrize("n", range(1, 7))
    def test_reduced_moment_is_low_degree_polynomial(self, n):
        assert polynomial_structure_residual(n) < 1e-8

    def test_degree_bound_is_sharp(self):
        # interpolating y_3 e^{-3s} with only two nodes must fail:
        # the reduced moment is a genuine quadratic
        def reduced(sigma):
            state = integrate_moments((1.0, 1.0, 1.0), sigma, steps=1500)
            return state.y[2] * math.exp(-3 * sigma)

        s0, s1 = 0.5, 1.0
        v0, v1 = reduced(s0), reduced(s1)
        line = v0 + (v1 - v0) * (0.75 - s0) / (s1 - s0)
        assert abs(line - reduced(0.75)) / reduced(0.75) > 1e-3

    def test_validation(self):
        with pytest.raises(ValueError):
            polynomial_structure_residual(0)


class TestLimitMoments:
    def test_first_two_at_half(self):
        qp = QParam(0.5)
        sigma = limit_sigma(qp)
        assert sigma == pytest.approx(math.log(2.0) ** 2, rel=1e-15)
        p = limit_moments(qp, 2)
        assert p.kind == "p"
        assert p.values[0] == pytest.approx(math.exp(sigma), rel=1e-9)
        assert p.values[1] == pytest.approx(
            (1.0 + 2.0 * sigma) * math.exp(2.0 * sigma), rel=1e-9
        )

    def test_matches_closed_forms_generally(self):
        for q in (0.3, 0.6, 0.9):
            qp = QParam(q)
            sigma = limit_sigma(qp)
            p = limit_moments(qp, 4)
            for n in range(1, 5):
                exact = closed_form(n, sigma, (1.0,) * 4)
                assert p.values[n - 1] == pytest.approx(exact, rel=1e-8)

    def test_classical_limit_all_ones(self):
        p = limit_moments(QParam(1.0), 5)
        assert p.values == (1.0,) * 5

    def test_near_classical_continuity(self):
        p = limit_moments(QParam(1.0 - 1e-6), 3)
        for v in p.values:
            assert v == pytest.approx(1.0, abs=1e-5)


class TestDynamicEquivalence:
    """dp_n/dt = n^2 ln^2(1/q) h_n along integrated trajectories."""

    @pytest.mark.parametrize("q", [0.4, 0.7])
    def test_time_derivative_matches_h_moments(self, q):
        qp = QParam(q)
        rho2 = qp.log_inv**2
        n_max = 4
        t0, dt = 0.8, 1e-5

        def p_at(t):
            return integrate_moments((1.0,) * n_max, t * rho2, steps=800).y

        plus, minus = p_at(t0 + dt), p_at(t0 - dt)
        here = p_at(t0)
        rhs = ode_rhs(here)
        for n in range(1, n_max + 1):
            fd = (plus[n - 1] - minus[n - 1]) / (2.0 * dt)
            assert fd == pytest.approx(rho2 * rhs[n - 1], rel=1e-7)

    def test_rhs_is_h_moment_of_a_diagram(self):
        # at sigma = 0 the flow starts from the p-moments of a diagram,
        # so the rhs there must be n^2 times its measured h-moments
        from qplancherel.diagrams import Partition, to_interlacing

        qp = QParam(0.6)
        w = to_interlacing(Partition((3, 1, 1)))
        n_max = 5
        p = p_moments(w, qp, n_max)
        h = h_moments(transition_measure(w, qp), qp, n_max)
        rhs = ode_rhs(p.values)
        for n in range(1, n_max + 1):
            assert rhs[n - 1] == pytest.approx(
                n * n * h.values[n - 1], rel=1e-10
            )
