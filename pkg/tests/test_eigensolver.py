import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import bessel_j0_first_zero
from plapeig.bounds import barta_certificate, sinp_barta_profile, theorem_lower_bound
from plapeig.eigensolver import (
    RADIAL_ASSUMPTION,
    RadialEigenProblem,
    interval_eigenvalue,
    rayleigh_quotient,
    rayleigh_upper,
    sharpness_upper_bound,
    shoot,
    shoot_full,
    solve_first_eigenvalue,
)
from plapeig.errors import DomainError, EigenSolveError
from plapeig.geometry import (
    Euclidean,
    PaperBump,
    RadialDomain,
    Spherical,
    diameter_bounds,
    interval_domain,
    sharpness_radius,
)
from plapeig.numerics import Tolerance
from plapeig.ptrig import pi_p


def interval(p, L=1.0):
    return RadialEigenProblem(p, interval_domain(L))


def ball(p, n=3, R=1.0, profile=None):
    return RadialEigenProblem(p, RadialDomain(profile or Euclidean(), n, R))


def cap(p, n, eps):
    return RadialEigenProblem(p, RadialDomain(Spherical(), n, math.pi - eps))


def bump(p, eps, n=3):
    return RadialEigenProblem(p, RadialDomain(PaperBump(eps=eps), n, sharpness_radius(eps)))


class TestShoot:
    def test_interval_exact_eigenvalue(self):
        z = shoot(interval(2.0), math.pi**2, horizon=1.5)
        assert z == pytest.approx(1.0, abs=1e-6)

    def test_interval_small_lambda(self):
        assert shoot(interval(2.0), 4.0) is None

    def test_euclidean_ball(self):
        # u = sin(pi r)/(pi r) solves the radial equation with lambda = pi^2
        z = shoot(ball(2.0), math.pi**2, horizon=1.5)
        assert z == pytest.approx(1.0, abs=1e-6)

    def test_sinc_profile(self):
        s = shoot_full(ball(2.0), math.pi**2, horizon=0.9, record=True)
        ref = np.sin(math.pi * s.r) / (math.pi * s.r)
        assert np.max(np.abs(s.u - ref)) < 1e-7

    def test_nonpositive_lambda(self):
        with pytest.raises(DomainError):
            shoot(interval(2.0), 0.0)
        with pytest.raises(DomainError):
            shoot(interval(2.0), -1.0)

    @given(st.floats(1.5, 6.0), st.floats(0.5, 2.0))
    def test_interval_zero_location(self, p, scale):
        # lambda = (p-1)(pi_p/L)^p has its first zero exactly at L
        L = scale
        z = shoot(interval(p, 3.0), interval_eigenvalue(p, L))
        assert z == pytest.approx(L, abs=1e-7)


class TestRayleigh:
    def test_exact_eigenfunction(self):
        q = rayleigh_quotient(interval(2.0), lambda x: np.sin(np.pi * x), lambda x: np.pi * np.cos(np.pi * x))
        assert q == pytest.approx(math.pi**2, rel=1e-10)

    def test_parabola(self):
        q = rayleigh_quotient(interval(2.0), lambda x: x * (1 - x), lambda x: 1 - 2 * x)
        assert q == pytest.approx(10.0, rel=1e-12)

    def test_numeric_derivative(self):
        q = rayleigh_quotient(interval(2.0), lambda x: x * (1 - x))
        assert q == pytest.approx(10.0, rel=1e-8)

    def test_cone_in_ball(self):
        # int r^2 dr / int (1-r)^2 r^2 dr = (1/3)/(1/30) = 10
        q = rayleigh_quotient(ball(2.0), lambda r: 1 - r, lambda r: -np.ones_like(r))
        assert q == pytest.approx(10.0, rel=1e-11)
        assert q >= math.pi**2

    def test_vanishing_function(self):
        with pytest.raises(DomainError, match="test function vanishes"):
            rayleigh_quotient(interval(2.0), lambda x: 0 * x, lambda x: 0 * x)

    def test_boundary_value_required(self):
        with pytest.raises(DomainError):
            rayleigh_quotient(ball(2.0), lambda r: 2 - r, lambda r: -np.ones_like(r))

    @given(st.floats(1.2, 6.0), st.integers(1, 4))
    def test_upper_bound_property(self, p, k):
        prob = ball(p, n=3)
        lam = solve_first_eigenvalue(prob).lam
        q = rayleigh_quotient(prob, lambda r: 1 - r**k, lambda r: -k * r ** (k - 1) if k > 1 else -np.ones_like(r))
        assert q >= lam * (1 - 1e-8)


class TestSolver:
    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 5.0])
    @pytest.mark.parametrize("L", [1.0, 2.0])
    def test_interval_closed_form(self, p, L):
        res = solve_first_eigenvalue(interval(p, L))
        exact = (p - 1) * (pi_p(p) / L) ** p
        assert res.lam == pytest.approx(exact, rel=1e-6)
        assert res.bracket[0] <= res.lam <= res.bracket[1]
        assert (res.bracket[1] - res.bracket[0]) / res.bracket[0] < 1e-8

    def test_interval_p3_value(self):
        assert solve_first_eigenvalue(interval(3.0)).lam == pytest.approx(2 * pi_p(3.0) ** 3, rel=1e-8)

    def test_euclidean_ball(self):
        assert solve_first_eigenvalue(ball(2.0)).lam == pytest.approx(math.pi**2, rel=1e-8)

    def test_disk_bessel(self):
        j01 = bessel_j0_first_zero()
        assert solve_first_eigenvalue(ball(2.0, n=2)).lam == pytest.approx(j01**2, rel=1e-8)

    @pytest.mark.parametrize("eps", [0.3, 0.1])
    def test_spherical_cap(self, eps):
        exact = (math.pi / (math.pi - eps)) ** 2 - 1
        assert solve_first_eigenvalue(cap(2.0, 3, eps)).lam == pytest.approx(exact, rel=1e-8)

    def test_cap_example_value(self):
        assert solve_first_eigenvalue(cap(2.0, 3, 0.1)).lam == pytest.approx(0.0668360, abs=5e-7)

    def test_result_fields(self):
        res = solve_first_eigenvalue(ball(2.5, n=3))
        assert res.shots > 0
        assert np.max(np.abs(res.u)) == pytest.approx(1.0)
        assert np.all(res.u[:-1] > 0)
        assert abs(res.u[-1]) < 1e-6
        assert res.r[-1] == pytest.approx(1.0, abs=1e-6)
        assert res.residual < 1e-6
        assert res.monotone_audit
        assert RADIAL_ASSUMPTION in res.assumptions
        d = res.to_dict()
        assert set(d) == {"lambda", "bracket_lo", "bracket_hi", "residual", "shots", "assumptions"}

    def test_interval_has_no_symmetry_assumption(self):
        assert solve_first_eigenvalue(interval(2.0)).assumptions == []

    def test_bracket_exhaustion(self, monkeypatch):
        import plapeig.eigensolver as es

        monkeypatch.setattr(es, "MAX_BRACKET_EXPANSIONS", 2)
        monkeypatch.setattr(es, "rayleigh_upper", lambda prob: 1e-6)
        with pytest.raises(EigenSolveError, match="no sign change"):
            es.solve_first_eigenvalue(interval(2.0))

    def test_custom_tolerance(self):
        res = solve_first_eigenvalue(interval(2.0), tol=Tolerance(rel_tol=1e-4))
        assert (res.bracket[1] - res.bracket[0]) / res.bracket[0] < 1e-4
        assert res.lam == pytest.approx(math.pi**2, rel=1e-4)

    def test_start_offset_sweep(self, monkeypatch):
        # halving the regular-center offset must not move lambda
        import plapeig.eigensolver as es

        base = solve_first_eigenvalue(ball(1.5, n=3)).lam
        orig = es._start

        def smaller(problem, lam):
            r0, u0, w0 = orig(problem, lam)
            r0 *= 0.5
            from plapeig.geometry import radial_integral

            return r0, 1.0, -lam * radial_integral(problem.domain, np.ones_like, 0.0, r0)

        monkeypatch.setattr(es, "_start", smaller)
        assert es.solve_first_eigenvalue(ball(1.5, n=3)).lam == pytest.approx(base, rel=1e-8)


class TestProperties:
    @given(st.floats(1.3, 6.0), st.sampled_from([2, 3, 4]))
    def test_sandwich(self, p, n):
        prob = ball(p, n=n)
        lam = solve_first_eigenvalue(prob).lam
        lower = barta_certificate(prob, sinp_barta_profile(prob))
        assert lower <= lam * (1 + 1e-8)
        assert lam <= rayleigh_upper(prob) * (1 + 1e-8)

    @given(st.floats(1.3, 6.0), st.sampled_from([2, 3]))
    def test_strict_theorem_bound_euclidean(self, p, n):
        prob = ball(p, n=n)
        lam = solve_first_eigenvalue(prob).lam
        assert lam > theorem_lower_bound(p, diameter_bounds(prob.domain)[1])

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    @pytest.mark.parametrize("eps", [0.2, 0.1])
    def test_strict_theorem_bound_bump(self, p, eps):
        prob = bump(p, eps)
        lam = solve_first_eigenvalue(prob).lam
        assert lam > theorem_lower_bound(p, diameter_bounds(prob.domain)[1])

    @pytest.mark.parametrize("c", [0.5, 2.0])
    @pytest.mark.parametrize(
        "prob",
        [ball(2.0), ball(3.0, n=2), bump(2.0, 0.1), cap(1.5, 3, 0.2), interval(2.5)],
        ids=["euclid-p2", "disk-p3", "bump-p2", "cap-p1.5", "interval"],
    )
    def test_scaling_law(self, prob, c):
        lam = solve_first_eigenvalue(prob).lam
        scaled = solve_first_eigenvalue(prob.scaled(c)).lam
        assert scaled == pytest.approx(c ** (-prob.p) * lam, rel=1e-6)

    @given(st.floats(1.2, 8.0), st.floats(0.05, 0.25))
    def test_positive_eigenfunction_single_zero(self, p, eps):
        res = solve_first_eigenvalue(bump(p, eps))
        assert np.all(res.u[:-1] > 0)
        assert abs(res.u[-1]) < 1e-6


class TestSharpnessUpperBound:
    def _direct(self, p, eps):
        from scipy.integrate import quad

        from plapeig.ptrig import cos_p, sin_p

        r = sharpness_radius(eps)
        tau = pi_p(p) / (2 * r)
        num, _ = quad(lambda t: abs(cos_p(p, t)) ** p, 0.0, pi_p(p) / 2, epsabs=1e-13, epsrel=1e-12, limit=200)
        den, _ = quad(lambda t: abs(sin_p(p, t)) ** p, 0.0, tau * (r - eps), epsabs=1e-13, epsrel=1e-12, limit=200)
        return tau**p * num / den

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
    @pytest.mark.parametrize("eps", [0.2, 0.1, 0.05])
    def test_matches_direct_quadrature(self, p, eps):
        assert sharpness_upper_bound(p, eps, 3) == pytest.approx(self._direct(p, eps), rel=1e-8)

    @pytest.mark.parametrize("p", [1.5, 2.0, 3.0, 5.0])
    def test_monotone_toward_limit(self, p):
        vals = [sharpness_upper_bound(p, e, 3) for e in (0.2, 0.1, 0.05, 0.02)]
        limit = (p - 1) * (pi_p(p) / 4) ** p
        assert all(a > b for a, b in zip(vals, vals[1:]))
        assert vals[-1] > limit
        assert vals[-1] == pytest.approx(limit, rel=0.06)

    def test_p2_limit_value(self):
        assert sharpness_upper_bound(2.0, 0.01, 3) == pytest.approx((math.pi / 4) ** 2, rel=0.02)
        assert (math.pi / 4) ** 2 == pytest.approx(0.616850, abs=1e-6)

    def test_regression(self):
        # first verified run; the direct t-quadrature above cross-checks these
        assert sharpness_upper_bound(2.0, 0.1, 3) == pytest.approx(0.7340208252807258, rel=1e-10)
        assert sharpness_upper_bound(3.0, 0.05, 3) == pytest.approx(0.4896660837206893, rel=1e-10)

    @pytest.mark.parametrize("p", [2.0, 3.0])
    def test_dominates_solver(self, p):
        for eps in (0.2, 0.1, 0.05):
            assert solve_first_eigenvalue(bump(p, eps)).lam <= sharpness_upper_bound(p, eps, 3)

    def test_errors(self):
        with pytest.raises(DomainError):
            sharpness_upper_bound(2.0, 1.0, 3)
        with pytest.raises(DomainError):
            sharpness_upper_bound(2.0, 0.1, 1)
