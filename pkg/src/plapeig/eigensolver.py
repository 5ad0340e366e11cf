"""First Dirichlet eigenvalue of the radial p-Laplacian by shooting.

With ``W = f**(n-1)`` and ``w = W |u'|**(p-2) u'`` the radial eigenvalue
equation becomes the first-order half-linear system

    u' = sign(w) (|w|/W)**(1/(p-1)),      w' = -lam W |u|**(p-2) u.

The first zero of ``u`` moves monotonically toward the center as ``lam``
grows (Sturm comparison), so ``lam_1`` is the value at which the first zero
sits exactly at the outer radius. The search keeps a predicate bracket
("first zero <= R") and accelerates it with Brent steps on a continuous
surrogate for ``u(R)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _backend
from .errors import DomainError, EigenSolveError, NumericalError
from .geometry import (
    PaperBump,
    RadialDomain,
    diameter_bounds,
    radial_integral,
    sharpness_radius,
)
from .numerics import Tolerance, find_root, integrate
from .ptrig import check_p, pi_p, sin_p, sincos_p

__all__ = [
    "RadialEigenProblem",
    "EigenResult",
    "Shot",
    "SOLVER_TOL",
    "ODE_TOL",
    "shoot",
    "shoot_full",
    "solve_first_eigenvalue",
    "rayleigh_quotient",
    "sinp_test_function",
    "rayleigh_upper",
    "sharpness_upper_bound",
    "interval_eigenvalue",
]

SOLVER_TOL = Tolerance(abs_tol=1e-12, rel_tol=1e-8)
ODE_TOL = Tolerance(abs_tol=1e-14, rel_tol=1e-10)
MAX_BRACKET_EXPANSIONS = 60

RADIAL_ASSUMPTION = "ground state assumed radially symmetric"


@dataclass(frozen=True)
class RadialEigenProblem:
    """The eigenproblem -Delta_p u = lam |u|^(p-2) u on a radial domain, u = 0 on the boundary."""

    p: float
    domain: RadialDomain

    def __post_init__(self):
        object.__setattr__(self, "p", check_p(self.p))

    @property
    def n(self) -> int:
        return self.domain.dimension

    @property
    def R(self) -> float:
        return float(self.domain.outer_radius)

    def scaled(self, c: float) -> "RadialEigenProblem":
        return RadialEigenProblem(self.p, self.domain.scaled(c))


@dataclass
class Shot:
    lam: float
    first_zero: Optional[float]
    u_end: float
    du_end: float
    nsteps: int
    nrejected: int
    r: np.ndarray = field(default=None, repr=False)
    u: np.ndarray = field(default=None, repr=False)
    w: np.ndarray = field(default=None, repr=False)

    def surrogate(self, R: float) -> float:
        """Continuous stand-in for u(R): linear extrapolation past an early zero."""
        if self.first_zero is None:
            return self.u_end
        return self.du_end * (R - self.first_zero)


@dataclass
class EigenResult:
    lam: float
    bracket: tuple
    r: np.ndarray = field(repr=False)
    u: np.ndarray = field(repr=False)
    du: np.ndarray = field(repr=False)
    residual: float
    shots: int
    assumptions: list
    monotone_audit: bool = True
    problem: Optional[RadialEigenProblem] = field(default=None, repr=False)

    # long-form name for callers that spell it out
    @property
    def lambda_(self) -> float:
        return self.lam

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "bracket_lo": self.bracket[0],
            "bracket_hi": self.bracket[1],
            "residual": self.residual,
            "shots": self.shots,
            "assumptions": list(self.assumptions),
        }


def _start(problem: RadialEigenProblem, lam: float):
    dom = problem.domain
    if dom.is_interval:
        return dom.start, 0.0, 1.0
    r0 = max(1e-6, 1e-8 * problem.R)
    # u ~ 1 near the center, so w(r0) = -lam int_0^r0 W
    mass = radial_integral(dom, np.ones_like, 0.0, r0)
    return r0, 1.0, -lam * mass


def shoot_full(
    problem: RadialEigenProblem,
    lam: float,
    horizon: Optional[float] = None,
    tol: Tolerance = ODE_TOL,
    record: bool = False,
    backend: Optional[str] = None,
) -> Shot:
    """One shot at ``lam`` from the inner end toward ``horizon`` (default R)."""
    if not (lam > 0 and math.isfinite(lam)):
        raise DomainError("lambda must be positive")
    dom = problem.domain
    top = problem.R if horizon is None else float(horizon)
    if not dom.is_interval and top > dom.profile.domain_max:
        raise DomainError("shooting horizon exceeds the profile domain")
    r0, u0, w0 = _start(problem, lam)
    tx, ty, td = (np.ascontiguousarray(a, dtype=float) for a in dom.profile.kernel_table())
    kern = _backend.get(backend)
    status, r, u, w, du, nsteps, nrej, rs, us, ws = kern.shoot_radial(
        dom.profile.kind,
        float(dom.profile.scale),
        dom.weight_exponent,
        problem.p,
        float(lam),
        r0,
        top,
        u0,
        w0,
        tx,
        ty,
        td,
        tol.rel_tol,
        tol.abs_tol,
        record,
    )
    shot = Shot(lam, r if status == 1 else None, u, du, nsteps, nrej)
    if record:
        shot.r = np.asarray(rs)
        shot.u = np.asarray(us)
        shot.w = np.asarray(ws)
    return shot


def shoot(problem: RadialEigenProblem, lam: float, horizon: Optional[float] = None, tol: Tolerance = ODE_TOL, backend: Optional[str] = None):
    """Location of the first zero of the shot at ``lam``, or None."""
    return shoot_full(problem, lam, horizon, tol, backend=backend).first_zero


# --------------------------------------------------------------------------
# Rayleigh quotients
# --------------------------------------------------------------------------


def rayleigh_quotient(
    problem: RadialEigenProblem,
    v: Callable,
    dv: Optional[Callable] = None,
    breakpoints=(),
    tol: Tolerance = Tolerance(abs_tol=1e-300, rel_tol=1e-11),
) -> float:
    """int |v'|^p f^(n-1) / int |v|^p f^(n-1) over the domain (omega cancels).

    ``v`` (and ``dv``) must be vectorized; without ``dv`` a centered
    difference is used. Kinks of ``v`` go in ``breakpoints``.
    """
    dom = problem.domain
    p = problem.p
    a, b = dom.start, problem.R
    scale_v = max(abs(float(v(np.array([a + 0.5 * (b - a)]))[0])), 1e-300)
    if abs(float(v(np.array([b]))[0])) > 1e-8 * scale_v:
        raise DomainError("test function must vanish at the outer radius")
    if dom.is_interval and abs(float(v(np.array([a]))[0])) > 1e-8 * scale_v:
        raise DomainError("test function must vanish at both interval ends")
    if dv is None:
        hstep = 1e-6 * (b - a)

        def dv(r):
            return (v(np.minimum(r + hstep, b)) - v(np.maximum(r - hstep, a))) / (
                np.minimum(r + hstep, b) - np.maximum(r - hstep, a)
            )

    edges = _graded_edges(a, b, breakpoints)
    num = radial_integral(dom, lambda r: np.abs(dv(r)) ** p, a, b, tol, edges)
    den = radial_integral(dom, lambda r: np.abs(v(r)) ** p, a, b, tol, edges)
    if not den > 1e-300:
        raise DomainError("test function vanishes")
    return num / den


def _graded_edges(a, b, kinks, levels=30):
    """Panel edges refined geometrically toward both ends and every kink.

    Trial functions built from sin_p have fractional-power behaviour at
    their peak and ends; geometric grading restores fast convergence of
    the panel rule there.
    """
    L = b - a
    steps = L * 0.5 ** np.arange(2, levels)
    pts = [a + steps, b - steps]
    for k in kinks:
        pts.append(k - steps)
        pts.append(k + steps)
        pts.append([k])
    out = np.concatenate(pts)
    return tuple(out[(out > a) & (out < b)])


def sinp_test_function(problem: RadialEigenProblem):
    """(v, dv) for the sin_p trial function.

    Regular center: ``v(r) = sin_p(tau (R - r))`` with ``tau = pi_p/(2R)``
    (flat at the pole). Interval: ``v(x) = sin_p(pi_p (x - a)/L)``.
    """
    p = problem.p
    dom = problem.domain
    pp = pi_p(p)
    if dom.is_interval:
        a, L = dom.start, dom.length
        k = pp / L

        def v(x):
            return sin_p(p, k * (np.asarray(x) - a))

        def dv(x):
            return k * sincos_p(p, k * (np.asarray(x) - a))[1]

        return v, dv
    R = problem.R
    tau = pp / (2.0 * R)

    def v(r):
        return sin_p(p, tau * (R - np.asarray(r)))

    def dv(r):
        return -tau * sincos_p(p, tau * (R - np.asarray(r)))[1]

    return v, dv


def rayleigh_upper(problem: RadialEigenProblem) -> float:
    """Rayleigh quotient of the sin_p trial function (an upper bound for lam_1)."""
    v, dv = sinp_test_function(problem)
    dom = problem.domain
    kinks = (dom.start + 0.5 * dom.length,) if dom.is_interval else ()
    return rayleigh_quotient(problem, v, dv, breakpoints=kinks)


def interval_eigenvalue(p: float, length: float) -> float:
    """(p-1) (pi_p / L)^p, the first Dirichlet eigenvalue of an interval."""
    return (check_p(p) - 1.0) * (pi_p(p) / length) ** p


def _lower_guess(problem: RadialEigenProblem) -> float:
    p = problem.p
    try:
        _, d_hi = diameter_bounds(problem.domain)
        return (p - 1.0) * (pi_p(p) / (2.0 * d_hi)) ** p
    except DomainError:
        pass
    from .bounds import barta_certificate, sinp_barta_profile

    try:
        mu = barta_certificate(problem, sinp_barta_profile(problem))
        if mu > 0:
            return mu
    except (DomainError, NumericalError):
        pass
    return 0.0


# --------------------------------------------------------------------------
# solver
# --------------------------------------------------------------------------


def solve_first_eigenvalue(
    problem: RadialEigenProblem,
    tol: Tolerance = SOLVER_TOL,
    ode_tol: Tolerance = ODE_TOL,
    backend: Optional[str] = None,
) -> EigenResult:
    """lam_1 by shooting; the returned bracket has relative width < tol.rel_tol."""
    R = problem.R
    upper = rayleigh_upper(problem)
    lower = _lower_guess(problem)
    lo = 0.5 * lower if lower > 0 else upper / 64.0
    hi = 2.0 * upper
    shots = 0
    zeros = []  # (lam, first_zero) for the monotonicity audit
    best = {"lo": None, "hi": None}

    def run(lam):
        nonlocal shots
        shots += 1
        s = shoot_full(problem, lam, tol=ode_tol, backend=backend)
        if s.first_zero is not None:
            zeros.append((lam, s.first_zero))
            if best["hi"] is None or lam < best["hi"]:
                best["hi"] = lam
        elif best["lo"] is None or lam > best["lo"]:
            best["lo"] = lam
        return s

    for _ in range(MAX_BRACKET_EXPANSIONS):
        if run(lo).first_zero is None:
            break
        lo *= 0.5
    else:
        raise EigenSolveError("no sign change; check problem (lower end)")
    for _ in range(MAX_BRACKET_EXPANSIONS):
        if run(hi).first_zero is not None:
            break
        hi *= 2.0
    else:
        raise EigenSolveError("no sign change; check problem (upper end)")

    def g(lam):
        return run(lam).surrogate(R)

    rel = tol.rel_tol
    lam = find_root(
        g,
        best["lo"],
        best["hi"],
        Tolerance(abs_tol=1e-300, rel_tol=0.25 * rel, max_iterations=tol.max_iterations),
    )
    # pin the bracket tightly around the Brent estimate, then bisect if needed
    for probe in (lam * (1.0 - 0.4 * rel), lam * (1.0 + 0.4 * rel)):
        if best["lo"] < probe < best["hi"]:
            run(probe)
    while (best["hi"] - best["lo"]) / best["lo"] >= rel:
        if shots > tol.max_iterations + 2 * MAX_BRACKET_EXPANSIONS:
            raise EigenSolveError("bracket did not shrink below tolerance")
        run(0.5 * (best["lo"] + best["hi"]))
    lo, hi = best["lo"], best["hi"]
    if not lo <= lam <= hi:
        lam = 0.5 * (lo + hi)

    audit = _audit(zeros)
    final = shoot_full(problem, lam, tol=ode_tol, record=True, backend=backend)
    r, u, w = final.r, final.u, final.w
    du = _du_from_w(problem, r, w)
    peak = np.max(np.abs(u))
    u = u / peak
    du = du / peak
    residual = _rayleigh_defect(problem, lam, r, u, du)
    assumptions = [] if problem.domain.is_interval else [RADIAL_ASSUMPTION]
    return EigenResult(
        lam=lam,
        bracket=(lo, hi),
        r=r,
        u=u,
        du=du,
        residual=residual,
        shots=shots,
        assumptions=assumptions,
        monotone_audit=audit,
        problem=problem,
    )


def _audit(zeros):
    pts = sorted(zeros)
    return all(z1 >= z2 for (_, z1), (_, z2) in zip(pts, pts[1:]))


def _du_from_w(problem, r, w):
    W = problem.domain.weight(r)
    a = np.abs(w) / W
    return np.sign(w) * a ** (1.0 / (problem.p - 1.0))


def _rayleigh_defect(problem, lam, r, u, du):
    """|R(u) - lam| / lam for the sampled eigenfunction (Hermite-interpolated)."""
    from scipy.interpolate import CubicHermiteSpline

    keep = np.concatenate(([True], np.diff(r) > 0))
    r, u, du = r[keep], u[keep], du[keep]
    if r.size < 3:
        return math.nan
    spline = CubicHermiteSpline(r, u, du)
    dspline = spline.derivative()
    p = problem.p
    num = radial_integral(problem.domain, lambda x: np.abs(dspline(x)) ** p, r[0], r[-1], extra_edges=tuple(r[1:-1]), tol=Tolerance(abs_tol=1e-300, rel_tol=1e-9))
    den = radial_integral(problem.domain, lambda x: np.abs(spline(x)) ** p, r[0], r[-1], extra_edges=tuple(r[1:-1]), tol=Tolerance(abs_tol=1e-300, rel_tol=1e-9))
    return abs(num / den - lam) / lam


# --------------------------------------------------------------------------
# the analytic upper bound used in the sharpness construction
# --------------------------------------------------------------------------


def sharpness_upper_bound(p: float, eps: float, n: int = 3) -> float:
    """tau^p int_0^{pi_p/2} cos_p^p / int_0^{tau (r - eps)} sin_p^p.

    Here ``r = 2 - 2 pi delta - delta`` and ``tau = pi_p/(2r)``; ``n`` drops
    out of the bound. Both integrals are taken after the substitution
    ``x = sin_p(t)``, ``dt = (1 - x^p)^(-1/p) dx``.
    """
    p = check_p(p)
    if int(n) != n or n < 2:
        raise DomainError("dimension must be an integer >= 2")
    r = sharpness_radius(eps)
    if not r > eps:
        raise DomainError("epsilon too large")
    tau = pi_p(p) / (2.0 * r)
    tol = Tolerance(abs_tol=1e-15, rel_tol=1e-13)

    def cos_pow(x, da, db):
        one_minus = -np.expm1(p * np.log1p(-db))  # 1 - x^p with x = 1 - db
        return one_minus ** (1.0 - 1.0 / p)

    num = integrate(cos_pow, 0.0, 1.0, tol, vectorized=True, endpoint_offsets=True)
    top = sin_p(p, tau * (r - eps))

    def sin_pow(x):
        return x**p * (1.0 - x**p) ** (-1.0 / p)

    den = integrate(sin_pow, 0.0, top, tol, vectorized=True)
    return tau**p * num / den
