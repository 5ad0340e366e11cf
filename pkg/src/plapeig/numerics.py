"""Numerical kernels: quadrature, root finding, ODE integration, log-Gamma.

Everything here is a pure function of its arguments. The double-exponential
(tanh-sinh) rule evaluates integrands at nodes whose distances to both
endpoints are known to full relative precision, which is what makes the
``(1 - t**p)**(-1/p)`` singularity of ``arcsin_p`` tractable for p close to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Optional, Sequence

import numpy as np

from .errors import (
    BracketError,
    DomainError,
    IntegrandError,
    ODEError,
    QuadratureError,
)

__all__ = [
    "Tolerance",
    "OdeEvent",
    "Trajectory",
    "integrate",
    "integrate_unit_batch",
    "integrate_panels",
    "find_root",
    "integrate_ode",
    "log_gamma",
    "unit_sphere_area",
    "DEFAULT_TOL",
]

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class Tolerance:
    """Absolute/relative accuracy targets and an iteration budget."""

    abs_tol: float = 1e-12
    rel_tol: float = 1e-10
    max_iterations: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0 and math.isfinite(self.abs_tol)):
            raise DomainError("abs_tol must be positive")
        if not (self.rel_tol > 0 and math.isfinite(self.rel_tol)):
            raise DomainError("rel_tol must be positive")
        if int(self.max_iterations) < 1:
            raise DomainError("max_iterations must be >= 1")


DEFAULT_TOL = Tolerance()


# --------------------------------------------------------------------------
# tanh-sinh quadrature
# --------------------------------------------------------------------------

# Half-width of the truncated transformed interval. At u = 6 the node sits
# about 1e-275 from the endpoint, still a normal double.
_TS_SPAN = 6.0
_TS_MAX_LEVEL = 12


@lru_cache(maxsize=None)
def _ts_nodes(level: int):
    """Nodes on [0, 1] added at ``level`` (all nodes for level 0).

    Returns ``(s, c, w)``: the node, its complement ``1 - s`` (both accurate
    to full relative precision) and the weight ``ds/du``.
    """
    h = 2.0 ** (-level)
    m = int(round(_TS_SPAN / h))
    if level == 0:
        j = np.arange(-m, m + 1)
    else:
        j = np.arange(-m + 1, m, 2)
    u = j * h
    v2 = math.pi * np.sinh(np.abs(u))  # 2v, v = (pi/2) sinh|u|
    e = np.exp(-v2)
    small = e / (1.0 + e)  # distance from the nearer endpoint
    large = 1.0 / (1.0 + e)
    s = np.where(u < 0, small, large)
    c = np.where(u < 0, large, small)
    w = math.pi * np.cosh(u) * e / (1.0 + e) ** 2
    for arr in (s, c, w):
        arr.setflags(write=False)
    return s, c, w


def integrate_unit_batch(
    g: Callable[[np.ndarray, np.ndarray], np.ndarray],
    tol: Tolerance = DEFAULT_TOL,
    min_level: int = 3,
    max_level: int = _TS_MAX_LEVEL,
):
    """Integrate a batch of integrands over [0, 1] with one node set.

    ``g(s, c)`` receives node arrays of shape ``(K,)`` (``c = 1 - s``) and
    returns values of shape ``(M, K)``. Level refinement stops when every
    row has converged. Returns ``(values, error_estimates)``.
    """
    s, c, w = _ts_nodes(0)
    vals = np.atleast_2d(np.asarray(g(s, c), dtype=float))
    _check_finite(vals)
    total = vals @ w
    estimate = total.copy()
    err = np.full_like(estimate, np.inf)
    for level in range(1, max_level + 1):
        s, c, w = _ts_nodes(level)
        vals = np.atleast_2d(np.asarray(g(s, c), dtype=float))
        _check_finite(vals)
        total = total + vals @ w
        new = total * 2.0 ** (-level)
        err = np.abs(new - estimate)
        estimate = new
        if level >= min_level and np.all(
            err <= np.maximum(tol.abs_tol, tol.rel_tol * np.abs(estimate))
        ):
            return estimate, err
    raise QuadratureError(
        "quadrature tolerance not met", best_estimate=estimate, error_estimate=err
    )


def _check_finite(vals):
    if not np.all(np.isfinite(vals)):
        raise IntegrandError("integrand invalid")


def integrate(
    f: Callable,
    a: float,
    b: float,
    tol: Tolerance = DEFAULT_TOL,
    *,
    vectorized: bool = False,
    endpoint_offsets: bool = False,
) -> float:
    """Integrate ``f`` over ``[a, b]`` by tanh-sinh quadrature.

    Integrable endpoint singularities of type ``(x-a)**-s`` or ``(b-x)**-s``
    with ``s < 1`` are handled without special casing. With
    ``endpoint_offsets=True`` the integrand is called as ``f(x, x - a, b - x)``
    with both offsets accurate near the endpoints. Samples that round onto an
    endpoint and come out non-finite are dropped; non-finite samples anywhere
    else raise :class:`IntegrandError`.
    """
    a = float(a)
    b = float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError("integration limits must be finite")
    if a > b:
        raise DomainError("integrate requires a <= b")
    if a == b:
        return 0.0
    length = b - a

    def g(s, c):
        x = a + length * s
        x = np.where(s > 0.5, b - length * c, x)
        da = length * s
        db = length * c
        if vectorized:
            with np.errstate(all="ignore"):
                y = f(x, da, db) if endpoint_offsets else f(x)
            y = np.asarray(y, dtype=float) * np.ones_like(x)
        else:
            y = np.empty_like(x)
            for i in range(x.size):
                try:
                    y[i] = f(x[i], da[i], db[i]) if endpoint_offsets else f(x[i])
                except (ZeroDivisionError, OverflowError, ValueError):
                    y[i] = math.nan
        bad = ~np.isfinite(y)
        if bad.any():
            on_end = (x == a) | (x == b)
            if np.any(bad & ~on_end):
                raise IntegrandError("integrand invalid")
            y = np.where(bad, 0.0, y)
        return length * y

    try:
        val, _ = integrate_unit_batch(g, tol)
    except QuadratureError as exc:
        best = None if exc.best_estimate is None else float(exc.best_estimate[0])
        err = None if exc.error_estimate is None else float(exc.error_estimate[0])
        raise QuadratureError(
            "quadrature tolerance not met", best_estimate=best, error_estimate=err
        ) from None
    return float(val[0])


@lru_cache(maxsize=8)
def _gauss_legendre(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def integrate_panels(
    f: Callable[[np.ndarray], np.ndarray],
    edges: Sequence[float],
    tol: Tolerance = DEFAULT_TOL,
    order: int = 16,
    max_doublings: int = 8,
) -> float:
    """Composite Gauss-Legendre over panels, doubling until converged.

    For smooth (or piecewise smooth, with the kinks listed in ``edges``)
    vectorized integrands. Each doubling splits every panel in two.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) < 0):
        raise DomainError("edges must be a nondecreasing sequence")
    edges = edges[np.concatenate(([True], np.diff(edges) > 0))]
    if edges.size < 2:
        return 0.0
    x, w = _gauss_legendre(order)

    def rule(e):
        lo = e[:-1, None]
        half = 0.5 * (e[1:] - e[:-1])[:, None]
        nodes = lo + half * (x + 1.0)
        vals = np.asarray(f(nodes.ravel()), dtype=float).reshape(nodes.shape)
        _check_finite(vals)
        return float(np.sum(vals * (half * w)))

    prev = rule(edges)
    for _ in range(max_doublings):
        mids = 0.5 * (edges[1:] + edges[:-1])
        edges = np.sort(np.concatenate((edges, mids)))
        cur = rule(edges)
        if abs(cur - prev) <= max(tol.abs_tol, tol.rel_tol * abs(cur)):
            return cur
        prev = cur
    raise QuadratureError("panel quadrature did not converge", best_estimate=prev)


# --------------------------------------------------------------------------
# root finding
# --------------------------------------------------------------------------


def find_root(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Tolerance = DEFAULT_TOL,
) -> float:
    """Bracketed root of ``g`` on ``[lo, hi]`` (Brent's method).

    Secant and inverse quadratic steps are accepted only when they stay well
    inside the current bracket; otherwise the step is a bisection, so
    convergence is guaranteed for continuous ``g``. Stops when
    ``|g(x)| <= abs_tol * (1 + |g(lo)| + |g(hi)|)`` or when the bracket is
    below ``max(abs_tol, rel_tol*|x|)``.
    """
    a, b = float(lo), float(hi)
    fa, fb = float(g(a)), float(g(b))
    if not (math.isfinite(fa) and math.isfinite(fb)):
        raise BracketError("bracket invalid: non-finite endpoint value")
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if (fa > 0) == (fb > 0):
        raise BracketError("bracket invalid: no sign change")
    gtol = tol.abs_tol * (1.0 + abs(fa) + abs(fb))
    c, fc = a, fa
    d = e = b - a
    for _ in range(tol.max_iterations):
        if (fb > 0) == (fc > 0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * EPS * abs(b) + 0.5 * max(tol.abs_tol, tol.rel_tol * abs(b))
        m = 0.5 * (c - b)
        if abs(m) <= tol1 or fb == 0.0 or abs(fb) <= gtol:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                pp = 2.0 * m * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                pp = s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if pp > 0:
                q = -q
            else:
                pp = -pp
            if 2.0 * pp < min(3.0 * m * q - abs(tol1 * q), abs(e * q)):
                e, d = d, pp / q
            else:
                d = e = m
        else:
            d = e = m
        a, fa = b, fb
        b = b + (d if abs(d) > tol1 else math.copysign(tol1, m))
        fb = float(g(b))
        if not math.isfinite(fb):
            raise BracketError("non-finite function value inside bracket")
    return b


# --------------------------------------------------------------------------
# ODE integration (Dormand-Prince 5(4) with dense output)
# --------------------------------------------------------------------------

_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
)
_B = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84)
_E = (-71 / 57600, 0.0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40)
# Shampine's free quartic interpolant, rows per stage (7th = FSAL stage).
_P = (
    (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432),
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799),
    (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072),
    (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632),
    (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844),
    (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423),
)
_P_ARR = np.array(_P)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
MAX_EVENT_BISECTIONS = 80


class OdeEvent(NamedTuple):
    location: float
    state: np.ndarray
    kind: str  # "first-zero-of-component" | "reached-endpoint"


class Trajectory(NamedTuple):
    r: np.ndarray
    y: np.ndarray
    nsteps: int
    nrejected: int


def _rms_norm(x, scale):
    return math.sqrt(float(np.mean((x / scale) ** 2)))


def _initial_step(rhs, r0, y0, f0, direction_span, rtol, atol):
    scale = atol + rtol * np.abs(y0)
    d0 = _rms_norm(y0, scale)
    d1 = _rms_norm(f0, scale)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, direction_span)
    y1 = y0 + h0 * f0
    f1 = np.asarray(rhs(r0 + h0, y1), dtype=float)
    d2 = _rms_norm(f1 - f0, scale) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, direction_span)


def _dense(y_old, h, K, theta):
    powers = np.array([theta, theta**2, theta**3, theta**4])
    return y_old + h * (K.T @ (_P_ARR @ powers))


def integrate_ode(
    rhs: Callable[[float, np.ndarray], np.ndarray],
    r0: float,
    r1: float,
    y0: Sequence[float],
    tol: Tolerance = DEFAULT_TOL,
    watch_component: Optional[int] = None,
    first_step: Optional[float] = None,
):
    """Adaptive Dormand-Prince integration from ``r0`` to ``r1``.

    If ``watch_component`` is given, integration stops at the first sign
    change of that component, located by bisection on the dense output
    (at most 80 halvings). A zero initial value takes its reference sign from
    the first accepted step. Returns ``(trajectory, event)``.
    """
    r0 = float(r0)
    r1 = float(r1)
    if not r0 < r1:
        raise DomainError("integrate_ode requires r0 < r1")
    rtol, atol = tol.rel_tol, tol.abs_tol
    y = np.array(y0, dtype=float)
    f = np.asarray(rhs(r0, y), dtype=float)
    if not (np.all(np.isfinite(y)) and np.all(np.isfinite(f))):
        raise ODEError("non-finite initial state")
    h = first_step or _initial_step(rhs, r0, y, f, r1 - r0, rtol, atol)
    r = r0
    rs = [r]
    ys = [y.copy()]
    K = np.empty((7, y.size))
    ref_sign = 0.0
    if watch_component is not None:
        ref_sign = math.copysign(1.0, y[watch_component]) if y[watch_component] != 0 else 0.0
    nsteps = nrej = 0
    rejected_last = False
    while r < r1:
        if h < 10 * EPS * max(abs(r), 1.0):
            raise ODEError("stiff or singular: step size underflow")
        if r + h > r1 or r1 - (r + h) < 10 * EPS * abs(r1):
            h = r1 - r
        K[0] = f
        for s in range(1, 6):
            dy = h * (K[:s].T @ np.array(_A[s]))
            K[s] = rhs(r + _C[s] * h, y + dy)
        y_new = y + h * (K[:6].T @ np.array(_B))
        f_new = np.asarray(rhs(r + h, y_new), dtype=float)
        K[6] = f_new
        if not (np.all(np.isfinite(y_new)) and np.all(np.isfinite(f_new))):
            nrej += 1
            h *= MIN_FACTOR
            rejected_last = True
            continue
        err_vec = h * (K.T @ np.array(_E))
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = _rms_norm(err_vec, scale)
        if err > 1.0:
            nrej += 1
            h *= max(MIN_FACTOR, SAFETY * err ** (-0.2))
            rejected_last = True
            continue
        nsteps += 1
        if watch_component is not None:
            yc_new = y_new[watch_component]
            if ref_sign == 0.0:
                if yc_new != 0.0:
                    ref_sign = math.copysign(1.0, yc_new)
            elif yc_new * ref_sign <= 0.0:
                lo_t, hi_t = 0.0, 1.0
                for _ in range(MAX_EVENT_BISECTIONS):
                    if (hi_t - lo_t) * h <= max(atol, 2 * EPS * abs(r)):
                        break
                    mid = 0.5 * (lo_t + hi_t)
                    if _dense(y, h, K, mid)[watch_component] * ref_sign > 0.0:
                        lo_t = mid
                    else:
                        hi_t = mid
                theta = 0.5 * (lo_t + hi_t)
                loc = r + theta * h
                state = _dense(y, h, K, theta)
                rs.append(loc)
                ys.append(state)
                traj = Trajectory(np.array(rs), np.array(ys), nsteps, nrej)
                return traj, OdeEvent(loc, state, "first-zero-of-component")
        r = r + h if r + h < r1 else r1
        y = y_new
        f = f_new
        rs.append(r)
        ys.append(y.copy())
        if err == 0.0:
            factor = MAX_FACTOR
        else:
            factor = min(MAX_FACTOR, SAFETY * err ** (-0.2))
        if rejected_last:
            factor = min(factor, 1.0)
        rejected_last = False
        h *= factor
    traj = Trajectory(np.array(rs), np.array(ys), nsteps, nrej)
    return traj, OdeEvent(r1, y.copy(), "reached-endpoint")


# --------------------------------------------------------------------------
# Gamma function
# --------------------------------------------------------------------------

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficients).
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _lanczos_log_gamma(x):
    z = x - 1.0
    acc = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        acc += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0.

    Lanczos (g=7, n=9) for x >= 1/2; below that the recurrence
    ``lgamma(x) = lgamma(x+1) - ln x``. Relative accuracy is about 1e-15
    except close to the zeros at x = 1 and x = 2, where the absolute error
    is about 1e-15.
    """
    x = float(x)
    if not (x > 0.0) or not math.isfinite(x):
        raise DomainError("log_gamma requires x > 0")
    if x == 1.0 or x == 2.0:
        return 0.0
    if x < 0.5:
        return _lanczos_log_gamma(x + 1.0) - math.log(x)
    return _lanczos_log_gamma(x)


def unit_sphere_area(n: int) -> float:
    """Area of the unit sphere S^{n-1} in R^n: 2 pi^{n/2} / Gamma(n/2)."""
    if int(n) != n or n < 2:
        raise DomainError("unit_sphere_area requires an integer n >= 2")
    n = int(n)
    return 2.0 * math.exp(0.5 * n * math.log(math.pi) - log_gamma(0.5 * n))
