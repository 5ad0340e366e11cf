"""Certified lower and upper bounds for the first Dirichlet eigenvalue.

Lower bounds come from the diameter estimate and from Barta certificates;
upper bounds come from trial-function Rayleigh quotients and from radial
p-capacity (the Maz'ya constant). Cheeger ratios and the p -> infinity
trend are diagnostics built from the same radial integrals.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, NumericalError
from .geometry import RadialDomain, diameter_bounds, radial_integral, volume_ball
from .numerics import Tolerance, integrate_panels
from .ptrig import check_p, pi_p, sincos_p

__all__ = [
    "theorem_lower_bound",
    "BartaProfile",
    "sinp_barta_profile",
    "barta_certificate",
    "cheeger_radial",
    "capacity_radial",
    "mazya_upper",
    "mazya_upper_min",
    "infinity_limit_estimate",
    "BoundReport",
    "bound_report",
]


def theorem_lower_bound(p: float, d: float) -> float:
    """(p-1) (pi_p / (2d))^p."""
    p = check_p(p)
    if not (d > 0 and math.isfinite(d)):
        raise DomainError("diameter must be positive")
    return (p - 1.0) * (pi_p(p) / (2.0 * d)) ** p


# --------------------------------------------------------------------------
# Barta certificates
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BartaProfile:
    """A radial function F with F' >= 0, given through its derivatives.

    ``dF`` is required. The flux derivative d/dr (|F'|^(p-2) F') is taken
    from ``dflux`` when supplied, otherwise from ``d2F`` as
    (p-1)|F'|^(p-2) F''. A profile may instead supply ``core``, the
    combination (|F'|^(p-2) F')' - (p-1)|F'|^p in closed form, which avoids
    cancelling two huge terms where F' blows up. ``grid`` sets the sampling
    density and the width R/grid of the excluded boundary layer.
    """

    dF: Callable
    d2F: Optional[Callable] = None
    dflux: Optional[Callable] = None
    F: Optional[Callable] = None
    core: Optional[Callable] = None
    grid: int = 2000

    def __post_init__(self):
        if self.d2F is None and self.dflux is None and self.core is None:
            raise DomainError("BartaProfile needs d2F, dflux or core")
        if int(self.grid) < 4:
            raise DomainError("grid must be at least 4")


def sinp_barta_profile(problem, A: Optional[float] = None, grid: int = 2000) -> BartaProfile:
    """F = -ln sin_p(A (R - r)), the profile used for the diameter bound.

    With ``s = A (R - r)`` one has F' = A cot_p(s) >= 0 and the flux
    identity (|F'|^(p-2) F')' = (p-1)(A^p + F'^p), so in one dimension the
    certificate equals (p-1) A^p exactly. Defaults to A = pi_p / (2L) so
    that F stays finite at the inner end.
    """
    p = problem.p
    dom = problem.domain
    R = problem.R
    if A is None:
        A = pi_p(p) / (2.0 * dom.length)

    def dF(r):
        s, c = sincos_p(p, A * (R - np.asarray(r, dtype=float)))
        return A * c / s

    def dflux(r):
        return (p - 1.0) * (A**p + np.abs(dF(r)) ** p)

    def core(r):
        return np.full(np.shape(r), (p - 1.0) * A**p)

    def F(r):
        s, _ = sincos_p(p, A * (R - np.asarray(r, dtype=float)))
        return -np.log(s)

    return BartaProfile(dF=dF, dflux=dflux, F=F, core=core, grid=grid)


def barta_certificate(problem, F: BartaProfile, layer: Optional[float] = None) -> float:
    """Infimum over an interior grid of Delta_p F - (p-1)|F'|^p.

    In radial form the expression is

        (|F'|^(p-2) F')' + (n-1)(f'/f)|F'|^(p-2) F' - (p-1)|F'|^p.

    Grid points closer than ``layer`` (default R/grid) to either end are
    skipped, since admissible F may blow up at the boundary.
    """
    p = problem.p
    dom = problem.domain
    a, b = dom.start, problem.R
    m = int(F.grid)
    width = (b - a) / m if layer is None else float(layer)
    r = np.linspace(a, b, m + 1)
    r = r[(r >= a + width * (1 - 1e-12)) & (r <= b - width * (1 - 1e-12))]
    if r.size == 0:
        raise DomainError("boundary layer leaves no interior grid")
    with np.errstate(all="ignore"):
        d1 = np.asarray(F.dF(r), dtype=float)
        if np.any(d1 < -1e-12 * np.maximum(1.0, np.max(np.abs(d1)))):
            raise DomainError("profile not admissible: F' < 0")
        d1 = np.maximum(d1, 0.0)
        g = d1 ** (p - 1.0)
        if F.core is not None:
            core = np.asarray(F.core(r), dtype=float)
        else:
            if F.dflux is not None:
                flux = np.asarray(F.dflux(r), dtype=float)
            else:
                flux = (p - 1.0) * d1 ** (p - 2.0) * np.asarray(F.d2F(r), dtype=float)
            core = flux - (p - 1.0) * d1**p
        if dom.is_interval:
            drift = 0.0
        else:
            prof = dom.profile
            drift = (dom.dimension - 1) * prof.df(r) / prof.f(r) * g
        mu = core + drift
    if not np.all(np.isfinite(mu)):
        raise NumericalError("non-finite Barta expression on the interior grid")
    return float(np.min(mu))


# --------------------------------------------------------------------------
# Cheeger, capacity, Maz'ya
# --------------------------------------------------------------------------


def _cumulative_volume(domain: RadialDomain, t: np.ndarray) -> np.ndarray:
    """omega-free int_0^t W on an increasing grid t[0] = start."""
    x, w = np.polynomial.legendre.leggauss(16)
    lo, hi = t[:-1, None], t[1:, None]
    half = 0.5 * (hi - lo)
    nodes = lo + half * (x + 1.0)
    vals = domain.weight(nodes.ravel()).reshape(nodes.shape)
    return np.concatenate(([0.0], np.cumsum(np.sum(vals * half * w, axis=1))))


def cheeger_radial(domain: RadialDomain, grid: int = 1024) -> float:
    """min over t in (0, R] of area(t)/vol(t) over concentric balls.

    This is the radial Cheeger ratio, an upper bound for the Cheeger
    constant over radial competitors only. For an interval it is 2/L.
    """
    if domain.is_interval:
        return 2.0 / domain.length
    R = float(domain.outer_radius)
    base = np.linspace(0.0, R, int(grid) + 1)
    fine = np.concatenate((base, domain.profile.breakpoints(0.0, R)))
    t = np.unique(fine)
    vol = _cumulative_volume(domain, t)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = domain.weight(t) / vol
    ratio[0] = np.inf
    k = int(np.argmin(ratio))
    best = ratio[k]
    # polish inside the neighbouring cells
    from scipy.optimize import minimize_scalar

    lo = t[max(k - 1, 1)] if k > 1 else 0.5 * t[1]
    hi = t[min(k + 1, t.size - 1)]
    if hi > lo:

        def h(s):
            return float(domain.weight(s)) / radial_integral(domain, np.ones_like, 0.0, s)

        res = minimize_scalar(h, bounds=(lo, hi), method="bounded", options={"xatol": 1e-12 * R})
        best = min(best, float(res.fun), h(hi))
    return float(best)


def _check_capacity_args(domain, t):
    if domain.is_interval:
        raise DomainError("capacity requires a regular center")
    t = float(t)
    if not (0.0 < t < domain.outer_radius):
        raise DomainError("need 0 < t < R")
    return t


def capacity_radial(domain: RadialDomain, t: float, p: float, tol: Tolerance = Tolerance(abs_tol=1e-300, rel_tol=1e-13)) -> float:
    """cap_p(B_t, B_R) = omega (int_t^R W^(-1/(p-1)))^(1-p)."""
    p = check_p(p)
    t = _check_capacity_args(domain, t)
    R = float(domain.outer_radius)
    q = -1.0 / (p - 1.0)
    edges = domain.edges(t, R)
    inner = integrate_panels(lambda r: domain.weight(r) ** q, edges, tol)
    if not (inner > 0 and math.isfinite(inner)):
        raise NumericalError("divergent capacity integral")
    return domain.omega * inner ** (1.0 - p)


def mazya_upper(domain: RadialDomain, t: float, p: float) -> float:
    """cap_p(B_t, B_R) / vol(B_t), an upper bound for the first eigenvalue."""
    return capacity_radial(domain, t, p) / volume_ball(domain, t)


def mazya_upper_min(domain: RadialDomain, p: float, grid: int = 64) -> float:
    """Smallest Maz'ya quotient over concentric balls B_t, t on a uniform grid."""
    R = float(domain.outer_radius)
    ts = np.linspace(0.0, R, int(grid) + 1)[1:-1]
    return min(mazya_upper(domain, t, p) for t in ts)


def infinity_limit_estimate(domain: RadialDomain, p_list, **solver_kw):
    """[(p, lambda_{1,p}^(1/p))] for increasing p."""
    from .eigensolver import RadialEigenProblem, solve_first_eigenvalue

    ps = [check_p(p) for p in p_list]
    if any(b <= a for a, b in zip(ps, ps[1:])):
        raise DomainError("p_list must be increasing")
    out = []
    for p in ps:
        lam = solve_first_eigenvalue(RadialEigenProblem(p, domain), **solver_kw).lam
        out.append((p, lam ** (1.0 / p)))
    return out


# --------------------------------------------------------------------------
# report
# --------------------------------------------------------------------------


@dataclass
class BoundReport:
    p: float
    n: int
    R: float
    profile: str
    diam_lo: float
    diam_hi: float
    theorem_lower: float
    rayleigh_upper: float
    barta_lower: Optional[float] = None
    mazya_upper: Optional[float] = None
    solver_lambda: Optional[float] = None

    @property
    def diam(self):
        return (self.diam_lo, self.diam_hi)

    def lowers(self):
        return [v for v in (self.theorem_lower, self.barta_lower) if v is not None]

    def uppers(self):
        return [v for v in (self.rayleigh_upper, self.mazya_upper) if v is not None]

    def consistent(self, slack: float = 1e-8) -> bool:
        """Every lower bound sits below every upper bound (and the solver value between)."""
        lows = self.lowers()
        ups = self.uppers()
        if self.solver_lambda is not None:
            lam = self.solver_lambda
            if any(lo > lam * (1 + slack) for lo in [self.barta_lower] if lo is not None):
                return False
            if any(up < lam * (1 - slack) for up in ups):
                return False
        return all(lo <= up * (1 + slack) for lo in [self.barta_lower] if lo is not None for up in ups) and bool(lows)

    def to_dict(self) -> dict:
        return asdict(self)


def bound_report(problem, solve: bool = True) -> BoundReport:
    """Collect every available bound for ``problem``."""
    from .eigensolver import rayleigh_upper, solve_first_eigenvalue

    dom = problem.domain
    d_lo, d_hi = diameter_bounds(dom)
    barta = barta_certificate(problem, sinp_barta_profile(problem))
    mazya = None if dom.is_interval else mazya_upper_min(dom, problem.p)
    lam = solve_first_eigenvalue(problem).lam if solve else None
    return BoundReport(
        p=problem.p,
        n=dom.dimension,
        R=problem.R,
        profile=dom.profile.label,
        diam_lo=d_lo,
        diam_hi=d_hi,
        theorem_lower=theorem_lower_bound(problem.p, d_hi),
        rayleigh_upper=rayleigh_upper(problem),
        barta_lower=barta,
        mazya_upper=mazya,
        solver_lambda=lam,
    )
