import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plapeig.errors import BracketError, DomainError, IntegrandError, ODEError, QuadratureError
from plapeig.numerics import (
    DEFAULT_TOL,
    Tolerance,
    find_root,
    integrate,
    integrate_ode,
    integrate_panels,
    log_gamma,
    unit_sphere_area,
)
from plapeig.ptrig import arcsin_p, pi_p


class TestTolerance:
    def test_defaults(self):
        assert DEFAULT_TOL.abs_tol == 1e-12
        assert DEFAULT_TOL.rel_tol == 1e-10
        assert DEFAULT_TOL.max_iterations >= 1

    @pytest.mark.parametrize(
        "kw", [{"abs_tol": 0.0}, {"rel_tol": -1.0}, {"max_iterations": 0}, {"abs_tol": math.nan}]
    )
    def test_rejects_bad_values(self, kw):
        with pytest.raises(DomainError):
            Tolerance(**kw)


class TestIntegrate:
    def test_inverse_sqrt_singularity(self):
        assert integrate(lambda x: 1.0 / math.sqrt(x), 0.0, 1.0) == pytest.approx(2.0, rel=1e-12)

    def test_constant(self):
        assert integrate(lambda x: 1.0, 0.0, math.pi) == pytest.approx(math.pi, rel=1e-14)

    def test_pi_3_half(self):
        with np.errstate(divide="ignore"):
            val = integrate(lambda t: (1.0 - t**3) ** (-1.0 / 3.0), 0.0, 1.0)
        assert val == pytest.approx(math.pi / (3 * math.sin(math.pi / 3)), rel=1e-10)

    def test_right_endpoint_singularity_with_offsets(self):
        # (1 - x)^(-0.9) integrates to 10; offsets keep the singular factor exact
        val = integrate(lambda x, da, db: db**-0.9, 0.0, 1.0, endpoint_offsets=True)
        assert val == pytest.approx(10.0, rel=1e-9)

    def test_empty_interval(self):
        assert integrate(math.exp, 1.0, 1.0) == 0.0

    def test_interior_nan_is_rejected(self):
        with pytest.raises(IntegrandError, match="integrand invalid"):
            integrate(lambda x: math.nan if 0.3 < x < 0.4 else 1.0, 0.0, 1.0)

    def test_budget_exhaustion_carries_estimate(self):
        tight = Tolerance(abs_tol=1e-300, rel_tol=1e-300)
        with pytest.raises(QuadratureError) as info:
            integrate(lambda x: abs(x - 0.3141), 0.0, 1.0, tight)
        assert info.value.best_estimate == pytest.approx(0.5 * (0.3141**2 + 0.6859**2), rel=1e-4)

    def test_reversed_bounds_rejected(self):
        with pytest.raises(DomainError):
            integrate(math.exp, 1.0, 0.0)

    @given(
        st.floats(-3, 3),
        st.floats(-3, 3),
        st.floats(0.1, 5.0),
        st.floats(0.0, 2 * math.pi),
    )
    def test_linearity(self, alpha, beta, k, phase):
        f = lambda x: math.cos(k * x + phase)
        g = lambda x: math.exp(-k * x) / math.sqrt(x)
        lhs = integrate(lambda x: alpha * f(x) + beta * g(x), 0.0, 2.0)
        rhs = alpha * integrate(f, 0.0, 2.0) + beta * integrate(g, 0.0, 2.0)
        assert abs(lhs - rhs) < 1e-9 * (1 + abs(lhs))

    def test_panels_match_closed_form(self):
        edges = np.linspace(0.0, 2.0, 5)
        assert integrate_panels(np.sin, edges) == pytest.approx(1.0 - math.cos(2.0), rel=1e-13)


class TestFindRoot:
    def test_sqrt2(self):
        assert find_root(lambda x: x * x - 2.0, 1.0, 2.0) == pytest.approx(math.sqrt(2.0), abs=1e-11)

    def test_cos(self):
        assert find_root(math.cos, 1.0, 2.0) == pytest.approx(math.pi / 2, abs=1e-11)

    def test_arcsin2(self):
        x = find_root(lambda x: arcsin_p(2.0, x) - math.pi / 6, 0.0, 1.0)
        assert x == pytest.approx(0.5, abs=1e-10)

    def test_no_sign_change(self):
        with pytest.raises(BracketError, match="bracket invalid"):
            find_root(lambda x: x * x + 1.0, -1.0, 1.0)

    def test_root_at_endpoint(self):
        assert find_root(lambda x: x - 1.0, 1.0, 3.0) == 1.0

    @given(st.floats(-5, 5), st.sampled_from([1, 3, 5, 7]))
    def test_residual_bound(self, shift, power):
        g = lambda x: (x - shift) ** power + (x - shift)
        lo, hi = shift - 3.0, shift + 4.0
        x = find_root(g, lo, hi)
        tol = DEFAULT_TOL
        ok_residual = abs(g(x)) <= tol.abs_tol * (1 + abs(g(lo)) + abs(g(hi)))
        ok_location = abs(x - shift) <= 10 * max(tol.abs_tol, tol.rel_tol * abs(x)) + 1e-12
        assert ok_residual or ok_location


def _oscillator(k2=1.0):
    return lambda r, y: np.array([y[1], -k2 * y[0]])


class TestIntegrateOde:
    def test_sine_zero(self):
        # starting at r = 0.1 on the sine curve, the first zero is pi
        y0 = np.array([math.sin(0.1), math.cos(0.1)])
        _, ev = integrate_ode(_oscillator(), 0.1, 10.0, y0, watch_component=0)
        assert ev.kind == "first-zero-of-component"
        assert ev.location == pytest.approx(math.pi, abs=1e-8)

    def test_linear_motion(self):
        _, ev = integrate_ode(lambda r, y: np.array([y[1], 0.0]), 0.0, 10.0, np.array([1.0, -1.0]), watch_component=0)
        assert ev.location == pytest.approx(1.0, abs=1e-10)

    def test_stiffer_oscillator(self):
        _, ev = integrate_ode(_oscillator(4.0), 0.0, 10.0, np.array([1.0, 0.0]), watch_component=0)
        assert ev.location == pytest.approx(math.pi / 4, abs=1e-8)

    def test_reaches_endpoint(self):
        traj, ev = integrate_ode(_oscillator(), 0.0, 1.0, np.array([1.0, 0.0]), watch_component=0)
        assert ev.kind == "reached-endpoint"
        assert ev.location == 1.0
        assert ev.state[0] == pytest.approx(math.cos(1.0), abs=1e-9)
        assert traj.r[0] == 0.0 and traj.r[-1] == 1.0

    def test_energy_conservation(self):
        tol = Tolerance(abs_tol=1e-12, rel_tol=1e-10)
        traj, _ = integrate_ode(_oscillator(), 0.0, 10.0, np.array([0.0, 1.0]), tol)
        energy = traj.y[:, 0] ** 2 + traj.y[:, 1] ** 2
        assert np.max(np.abs(energy - 1.0)) < 10 * tol.rel_tol

    def test_blowup_is_reported(self):
        with pytest.raises(ODEError):
            integrate_ode(lambda r, y: np.array([y[0] ** 2]), 0.0, 2.0, np.array([1.0]))

    def test_reversed_interval_rejected(self):
        with pytest.raises(DomainError):
            integrate_ode(_oscillator(), 1.0, 0.0, np.array([1.0, 0.0]))


class TestLogGamma:
    @pytest.mark.parametrize(
        "x, expected",
        [(1.0, 0.0), (2.0, 0.0), (0.5, 0.5 * math.log(math.pi)), (5.0, math.log(24.0))],
    )
    def test_values(self, x, expected):
        assert log_gamma(x) == pytest.approx(expected, rel=1e-12, abs=1e-15)

    @pytest.mark.parametrize("x", [0.3, 1.7, 4.2])
    def test_recurrence(self, x):
        assert math.exp(log_gamma(x + 1)) == pytest.approx(x * math.exp(log_gamma(x)), rel=1e-10)

    @given(st.floats(1e-3, 150.0))
    def test_matches_math_lgamma(self, x):
        ref = math.lgamma(x)
        assert abs(log_gamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))

    @pytest.mark.parametrize("x", [0.0, -1.5])
    def test_domain(self, x):
        with pytest.raises(DomainError):
            log_gamma(x)


class TestUnitSphereArea:
    @pytest.mark.parametrize("n, expected", [(2, 2 * math.pi), (3, 4 * math.pi), (4, 2 * math.pi**2)])
    def test_values(self, n, expected):
        assert unit_sphere_area(n) == pytest.approx(expected, rel=1e-14)

    def test_domain(self):
        with pytest.raises(DomainError):
            unit_sphere_area(1)


def test_pi_p_helper_used_above_is_consistent():
    assert pi_p(3.0) == pytest.approx(4 * math.pi / (3 * math.sqrt(3)), rel=1e-15)
