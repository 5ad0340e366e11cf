import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from plapeig.errors import DomainError
from plapeig.geometry import (
    Euclidean,
    PaperBump,
    RadialDomain,
    Spherical,
    Tabulated,
    Unit,
    boundary_area,
    bump_j,
    bump_j_prime,
    bump_profile,
    diameter_bounds,
    interval_domain,
    parse_profile,
    ricci_nonneg_check,
    sharpness_radius,
    volume_ball,
)

# delta = f_eps(eps) and the containment radius, from an independent
# 30-digit quadrature of the bump (mpmath), frozen here
DELTA = {0.2: 0.034457289605977759, 0.1: 0.0087970135069311834, 0.05: 0.0022114324570702155}
RADIUS = {0.2: 1.7490411746165109, 0.1: 1.9359297204792584, 0.05: 1.9838937276208462}


class TestBump:
    @given(st.floats(0.01, 1.0))
    def test_center_and_support(self, eps):
        assert bump_j(eps, 0.0) == 1.0
        assert bump_j(eps, eps) == 0.0
        assert bump_j(eps, 2 * eps) == 0.0

    def test_combined_exponent_value(self):
        assert bump_j(0.1, 0.05) == pytest.approx(math.exp(-100.0 / 3.0), rel=1e-12)

    def test_no_overflow_for_tiny_eps(self):
        # the literal product exp(1/eps^2) exp(1/(r^2 - eps^2)) overflows here
        v = bump_j(0.01, 0.005)
        assert 0.0 <= v < 1.0 and math.isfinite(v)

    @given(st.floats(0.02, 0.5), st.floats(0.0, 1.0), st.floats(0.0, 1.0))
    def test_decreasing(self, eps, a, b):
        lo, hi = sorted((a * eps, b * eps))
        assert bump_j(eps, hi) <= bump_j(eps, lo)

    def test_derivative_matches_difference(self):
        eps = 0.1
        r = np.linspace(0.001, 0.099, 50)
        h = 1e-7
        fd = (bump_j(eps, r + h) - bump_j(eps, r - h)) / (2 * h)
        assert np.allclose(bump_j_prime(eps, r), fd, rtol=1e-5, atol=1e-8)


class TestBumpProfile:
    def test_origin(self):
        f, df = bump_profile(0.1, 0.0)
        assert f == 0.0
        assert df == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("eps", sorted(DELTA))
    def test_delta_against_oracle(self, eps):
        delta = PaperBump(eps=eps).delta
        assert delta == pytest.approx(DELTA[eps], rel=1e-13)
        assert 0 < delta < eps

    def test_constant_beyond_eps(self):
        assert bump_profile(0.1, 0.2)[0] == bump_profile(0.1, 0.1)[0]
        assert bump_profile(0.1, 0.2)[1] == 0.0

    def test_derivative_is_bump(self):
        eps = 0.1
        prof = PaperBump(eps=eps)
        r = np.linspace(0.0, 2 * eps, 301)
        h = 1e-6
        fd = (prof.f(r + h) - prof.f(np.maximum(r - h, 0.0))) / (r + h - np.maximum(r - h, 0.0))
        assert np.max(np.abs(fd - bump_j(eps, r))) < 1e-6

    def test_concavity_ratio_decreasing(self):
        prof = PaperBump(eps=0.1)
        r = np.linspace(1e-4, 0.5, 2000)
        ratio = prof.f(r) / r
        assert np.all(np.diff(ratio) <= 1e-15)

    def test_negative_radius_rejected(self):
        with pytest.raises(DomainError):
            bump_profile(0.1, -0.1)

    def test_scaling(self):
        prof = PaperBump(eps=0.1)
        big = prof.scaled(2.0)
        r = np.linspace(0, 0.5, 11)
        assert np.allclose(big.f(2 * r), 2 * prof.f(r), rtol=1e-15, atol=0)


class TestSharpnessRadius:
    @pytest.mark.parametrize("eps", sorted(RADIUS))
    def test_regression(self, eps):
        assert sharpness_radius(eps) == pytest.approx(RADIUS[eps], rel=1e-14)

    @given(st.floats(0.01, 0.25))
    def test_range(self, eps):
        r = sharpness_radius(eps)
        assert 2 - (2 * math.pi + 1) * eps < r < 2
        assert r > 0

    def test_tends_to_two(self):
        assert sharpness_radius(0.01) == pytest.approx(2.0, abs=1e-3)

    def test_too_large(self):
        with pytest.raises(DomainError, match="epsilon too large"):
            sharpness_radius(1.0)


class TestVolumes:
    def test_euclidean_3(self):
        dom = RadialDomain(Euclidean(), 3, 1.0)
        assert volume_ball(dom, 1.0) == pytest.approx(4 * math.pi / 3, rel=1e-13)
        assert boundary_area(dom, 1.0) == pytest.approx(4 * math.pi, rel=1e-14)

    def test_euclidean_2(self):
        dom = RadialDomain(Euclidean(), 2, 2.0)
        assert volume_ball(dom, 2.0) == pytest.approx(4 * math.pi, rel=1e-13)
        assert boundary_area(dom, 2.0) == pytest.approx(4 * math.pi, rel=1e-14)

    def test_sphere_hemisphere(self):
        # 4 pi int_0^{pi/2} sin^2 = pi^2
        dom = RadialDomain(Spherical(), 3, math.pi)
        assert volume_ball(dom, math.pi / 2) == pytest.approx(math.pi**2, rel=1e-13)
        assert boundary_area(dom, math.pi / 2) == pytest.approx(4 * math.pi, rel=1e-14)

    def test_out_of_range(self):
        dom = RadialDomain(Euclidean(), 3, 1.0)
        with pytest.raises(DomainError):
            volume_ball(dom, 1.5)
        with pytest.raises(DomainError):
            boundary_area(dom, 0.0)

    def test_volume_increasing_and_area_continuous(self):
        dom = RadialDomain(PaperBump(eps=0.1), 3, 1.0)
        ts = np.linspace(0.01, 1.0, 40)
        vols = [volume_ball(dom, t) for t in ts]
        assert np.all(np.diff(vols) > 0)
        below = boundary_area(dom, 0.1 - 1e-9)
        above = boundary_area(dom, 0.1 + 1e-9)
        assert above == pytest.approx(below, rel=1e-6)


class TestDiameter:
    def test_euclidean(self):
        assert diameter_bounds(RadialDomain(Euclidean(), 3, 1.0)) == (2.0, 2.0)

    def test_bump_sharpness_ball(self):
        eps = 0.1
        t = sharpness_radius(eps)
        lo, hi = diameter_bounds(RadialDomain(PaperBump(eps=eps), 3, t))
        assert lo == t
        assert hi == pytest.approx(t + math.pi * DELTA[eps], rel=1e-13)

    def test_bump_inside_cap(self):
        eps = 0.1
        lo, hi = diameter_bounds(RadialDomain(PaperBump(eps=eps), 3, eps / 2))
        assert eps / 2 <= lo <= hi <= eps

    def test_sphere_exact(self):
        lo, hi = diameter_bounds(RadialDomain(Spherical(), 3, math.pi - 0.1))
        assert lo == hi == pytest.approx(math.pi)

    def test_interval(self):
        assert diameter_bounds(interval_domain(2.0)) == (2.0, 2.0)

    def test_non_monotone_table(self, tmp_path):
        prof = Tabulated(r=(0.0, 0.5, 1.0, 1.5), values=(0.0, 0.5, 0.2, 0.1))
        with pytest.raises(DomainError, match="diameter bounds unavailable"):
            diameter_bounds(RadialDomain(prof, 2, 1.5))


class TestRicci:
    def test_euclidean(self):
        assert ricci_nonneg_check(Euclidean())

    def test_bump(self):
        assert ricci_nonneg_check(PaperBump(eps=0.1))

    def test_sphere(self):
        assert ricci_nonneg_check(Spherical(), r_max=math.pi - 0.1)

    def test_table_needs_second_derivative(self):
        prof = Tabulated(r=(0.0, 0.5, 1.0), values=(0.0, 0.5, 0.9))
        with pytest.raises(DomainError, match="insufficient smoothness data"):
            ricci_nonneg_check(prof)


class TestProfilesAndDomains:
    def test_parse(self, tmp_path):
        assert isinstance(parse_profile("euclidean"), Euclidean)
        assert isinstance(parse_profile("sphere"), Spherical)
        assert parse_profile("bump:0.1").eps == 0.1
        path = tmp_path / "prof.csv"
        path.write_text("r,f\n0,0\n0.5,0.5\n1,0.9\n2,1.2\n")
        prof = parse_profile(f"table:{path}")
        assert isinstance(prof, Tabulated)
        assert prof.f(0.5) == pytest.approx(0.5)
        with pytest.raises(DomainError):
            parse_profile("torus")
        with pytest.raises(DomainError):
            parse_profile("bump:abc")

    def test_table_header_checked(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x,y\n0,0\n1,1\n2,2\n")
        with pytest.raises(DomainError):
            Tabulated.from_csv(path)

    def test_table_monotone_interpolation(self):
        prof = Tabulated(r=(0.0, 1.0, 2.0, 3.0), values=(0.0, 1.0, 1.0, 1.5))
        r = np.linspace(1.0, 2.0, 101)
        assert np.allclose(prof.f(r), 1.0)

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(r=(0.0, 1.0), values=(0.0, 1.0)),
            dict(r=(0.0, 1.0, 0.5), values=(0.0, 1.0, 2.0)),
            dict(r=(0.1, 1.0, 2.0), values=(0.0, 1.0, 2.0)),
            dict(r=(0.0, 1.0, 2.0), values=(0.0, -1.0, 2.0)),
        ],
    )
    def test_table_validation(self, kwargs):
        with pytest.raises(DomainError):
            Tabulated(**kwargs)

    def test_domain_validation(self):
        with pytest.raises(DomainError):
            RadialDomain(Spherical(), 3, 4.0)
        with pytest.raises(DomainError):
            RadialDomain(Euclidean(), 1, 1.0)
        with pytest.raises(DomainError):
            RadialDomain(Euclidean(), 3, -1.0)
        with pytest.raises(DomainError):
            RadialDomain(Unit(), 1, 1.0)
        with pytest.raises(DomainError):
            RadialDomain(Euclidean(), 3, 1.0, "dirichlet")

    def test_invariants_at_origin(self):
        for prof in (Euclidean(), Spherical(), PaperBump(eps=0.1), PaperBump(eps=0.05, scale=3.0)):
            assert prof.f(0.0) == 0.0
            assert prof.df(0.0) == pytest.approx(1.0, abs=1e-12)

    def test_interval_domain(self):
        dom = interval_domain(2.0, inner=1.0)
        assert dom.is_interval and dom.start == 1.0 and dom.length == 2.0
        assert dom.omega == 1.0
