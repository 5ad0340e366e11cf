"""Generalized trigonometric functions sin_p, cos_p, tan_p, cot_p, arcsin_p.

``arcsin_p(x) = int_0^x (1 - t**p)**(-1/p) dt`` and ``sin_p`` is its inverse
on ``[0, pi_p/2]``, extended to the line by ``sin_p(pi_p - t) = sin_p(t)``,
oddness and ``2 pi_p``-periodicity. ``cos_p = sin_p'`` satisfies
``|sin_p|**p + |cos_p|**p = 1``.

All functions accept scalars or arrays. Internally the base interval is split
at ``t_half = arcsin_p(1/2)``: below it ``sin_p`` is found as ``x`` solving
``arcsin_p(x) = t``; above it the unknown is the complement ``c = 1 - x``,
solved from the tail integral ``T(c) = int_0^c (1 - (1-u)**p)**(-1/p) du``.
Keeping ``c`` explicit is what makes ``cos_p`` accurate near ``pi_p/2``.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .errors import DomainError, PoleError
from .numerics import DEFAULT_TOL, Tolerance, integrate_unit_batch, log_gamma

__all__ = [
    "P_MIN",
    "P_MAX",
    "check_p",
    "pi_p",
    "arcsin_p",
    "sin_p",
    "cos_p",
    "sincos_p",
    "tan_p",
    "cot_p",
    "beta_via_gamma",
    "beta_via_ptrig",
]

P_MIN = 1.05
P_MAX = 100.0

# Quadrature accuracy used inside the inversions; tighter than DEFAULT_TOL so
# that the inverse is good to a few ulps.
_INNER_TOL = Tolerance(abs_tol=1e-16, rel_tol=1e-15)
_POLE_THRESHOLD = 1e-15
_NEWTON_MAX = 60


def check_p(p) -> float:
    """Validate the exponent; the supported range is [1.05, 100]."""
    try:
        p = float(p)
    except (TypeError, ValueError):
        raise DomainError(f"exponent p must be a real number, got {p!r}") from None
    if not (P_MIN <= p <= P_MAX):
        raise DomainError(f"exponent p={p} outside supported range [{P_MIN}, {P_MAX}]")
    return p


def pi_p(p) -> float:
    """pi_p = 2 pi / (p sin(pi/p)), the first positive zero of sin_p."""
    p = check_p(p)
    return 2.0 * math.pi / (p * math.sin(math.pi / p))


def _one_minus_pow(p, c):
    """1 - (1 - c)**p, accurate for small c."""
    return -np.expm1(p * np.log1p(-c))


def _head(p, x, tol=_INNER_TOL):
    """int_0^x (1 - t**p)**(-1/p) dt for 0 <= x <= 1/2 (array)."""
    x = np.asarray(x, dtype=float)
    if x.size == 0:
        return x.copy()
    xp = x[:, None] ** p

    def g(s, c):
        return (1.0 - xp * s**p) ** (-1.0 / p)

    vals, _ = integrate_unit_batch(g, tol)
    return x * vals


def _tail(p, c, tol=_INNER_TOL):
    """int_0^c (1 - (1-u)**p)**(-1/p) du for 0 <= c <= 1/2 (array).

    The integrand is singular like ``(p u)**(-1/p)`` at u = 0. Substituting
    ``u = c s**m`` with ``m = p/(p-1)`` cancels the singularity exactly:

        T(c) = m p**(-1/p) c**((p-1)/p) int_0^1 h(c s**m)**(-1/p) ds,

    where ``h(u) = (1 - (1-u)**p) / (p u)`` is smooth with ``h(0) = 1``.
    """
    c = np.asarray(c, dtype=float)
    out = np.zeros_like(c)
    nz = c > 0
    if not np.any(nz):
        return out
    m = p / (p - 1.0)
    cc = c[nz][:, None]

    def g(s, _):
        u = cc * s**m
        with np.errstate(divide="ignore", invalid="ignore"):
            h = _one_minus_pow(p, u) / (p * u)
        h = np.where(u > 1e-300, h, 1.0)
        return h ** (-1.0 / p)

    vals, _ = integrate_unit_batch(g, tol)
    out[nz] = m * p ** (-1.0 / p) * c[nz] ** (1.0 / m) * vals
    return out


@lru_cache(maxsize=256)
def _half_constants(p):
    """(arcsin_p(1/2), T(1/2)) by quadrature; their sum is pi_p/2."""
    head = float(_head(p, np.array([0.5]))[0])
    tail = float(_tail(p, np.array([0.5]))[0])
    return head, tail


def arcsin_p(p, x):
    """arcsin_p(x) for x in [0, 1], computed by quadrature."""
    p = check_p(p)
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(~np.isfinite(x)) or np.any(x < 0.0) or np.any(x > 1.0):
        raise DomainError("arcsin_p requires 0 <= x <= 1")
    head_half, tail_half = _half_constants(p)
    out = np.empty_like(x)
    low = x <= 0.5
    out[low] = _head(p, x[low])
    high = ~low
    if np.any(high):
        out[high] = head_half + tail_half - _tail(p, 1.0 - x[high])
    return float(out[0]) if scalar else out


def _invert_low(p, t):
    """x in [0, 1/2] with arcsin_p(x) = t, t in [0, arcsin_p(1/2)]."""
    head_half, _ = _half_constants(p)
    x = np.clip(t, 0.0, 0.5) * (0.5 / head_half)
    lo = np.zeros_like(t)
    hi = np.full_like(t, 0.5)
    active = np.ones(t.shape, dtype=bool)
    for _ in range(_NEWTON_MAX):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        xa = x[idx]
        fval = _head(p, xa) - t[idx]
        lo[idx] = np.where(fval < 0, xa, lo[idx])
        hi[idx] = np.where(fval > 0, xa, hi[idx])
        step = fval * (1.0 - xa**p) ** (1.0 / p)
        xn = xa - step
        outside = (xn <= lo[idx]) | (xn >= hi[idx])
        xn = np.where(outside, 0.5 * (lo[idx] + hi[idx]), xn)
        done = (np.abs(xn - xa) <= 4 * np.finfo(float).eps * np.maximum(xn, 1e-300)) | (fval == 0)
        x[idx] = np.where(fval == 0, xa, xn)
        active[idx[done]] = False
    return x


def _invert_high(p, d):
    """Complement c in [0, 1/2] with T(c) = d, d in [0, T(1/2)].

    Newton runs in y = c**((p-1)/p), in which T is close to linear near 0.
    """
    _, tail_half = _half_constants(p)
    k = (p - 1.0) / p  # c = y**(1/k)
    y_max = 0.5**k
    # leading term: T(c) ~ p**(-1/p) c**k / k
    y = np.clip(d * k * p ** (1.0 / p), 0.0, y_max)
    lo = np.zeros_like(d)
    hi = np.full_like(d, y_max)
    active = d > 0
    y[~active] = 0.0
    for _ in range(_NEWTON_MAX):
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        ya = y[idx]
        ca = ya ** (1.0 / k)
        fval = _tail(p, ca) - d[idx]
        lo[idx] = np.where(fval < 0, ya, lo[idx])
        hi[idx] = np.where(fval > 0, ya, hi[idx])
        # dT/dy = T'(c) dc/dy
        with np.errstate(divide="ignore", invalid="ignore"):
            dcdy = ya ** (1.0 / k - 1.0) / k
            deriv = _one_minus_pow(p, ca) ** (-1.0 / p) * dcdy
            yn = ya - fval / deriv
        bad = ~np.isfinite(yn) | (yn <= lo[idx]) | (yn >= hi[idx])
        yn = np.where(bad, 0.5 * (lo[idx] + hi[idx]), yn)
        done = (np.abs(yn - ya) <= 4 * np.finfo(float).eps * np.maximum(yn, 1e-300)) | (fval == 0)
        y[idx] = np.where(fval == 0, ya, yn)
        active[idx[done]] = False
    return y ** (1.0 / k)


def _base_sincos(p, t, d):
    """sin_p and cos_p on the base interval given t and d = pi_p/2 - t.

    Both arguments are passed so callers that know the distance to pi_p/2
    exactly (quadrature nodes) do not lose it to cancellation.
    """
    head_half, _ = _half_constants(p)
    s = np.empty_like(t)
    co = np.empty_like(t)
    low = t <= head_half
    if np.any(low):
        x = _invert_low(p, t[low])
        s[low] = x
        co[low] = (1.0 - x**p) ** (1.0 / p)
    high = ~low
    if np.any(high):
        c = _invert_high(p, np.maximum(d[high], 0.0))
        s[high] = 1.0 - c
        co[high] = _one_minus_pow(p, c) ** (1.0 / p)
    return s, co


def sincos_p(p, t):
    """Return ``(sin_p(t), cos_p(t))``; scalars in, scalars out."""
    p = check_p(p)
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if not np.all(np.isfinite(t)):
        raise DomainError("argument must be finite")
    pp = pi_p(p)
    half = 0.5 * pp
    sign = np.where(t < 0, -1.0, 1.0)
    r = np.fmod(np.abs(t), 2.0 * pp)
    # quadrant 0: [0, pi/2), 1: [pi/2, pi), 2: [pi, 3pi/2), 3: [3pi/2, 2pi)
    q = np.minimum((r // half).astype(int), 3)
    base = np.select([q == 0, q == 1, q == 2, q == 3], [r, pp - r, r - pp, 2.0 * pp - r])
    base = np.clip(base, 0.0, half)
    s, c = _base_sincos(p, base, half - base)
    s_sign = np.where(q >= 2, -1.0, 1.0)
    c_sign = np.where((q == 1) | (q == 2), -1.0, 1.0)
    s = sign * s_sign * s
    c = c_sign * c
    if scalar:
        return float(s[0]), float(c[0])
    return s, c


def sin_p(p, t):
    """The odd, 2 pi_p-periodic generalized sine."""
    return sincos_p(p, t)[0]


def cos_p(p, t):
    """Derivative of sin_p, from the generalized Pythagorean identity."""
    return sincos_p(p, t)[1]


def _ratio(num, den, scalar, what):
    den_arr = np.atleast_1d(den)
    small = np.abs(den_arr) < _POLE_THRESHOLD
    if np.any(small):
        i = int(np.argmax(small))
        raise PoleError(f"{what}: pole", sign=int(np.sign(np.atleast_1d(num)[i]) or 1))
    out = np.atleast_1d(num) / den_arr
    return float(out[0]) if scalar else out


def cot_p(p, t):
    """cos_p / sin_p; raises :class:`PoleError` where sin_p vanishes."""
    scalar = np.ndim(t) == 0
    s, c = sincos_p(p, t)
    return _ratio(c, s, scalar, "cot_p")


def tan_p(p, t):
    """sin_p / cos_p; raises :class:`PoleError` where cos_p vanishes."""
    scalar = np.ndim(t) == 0
    s, c = sincos_p(p, t)
    return _ratio(s, c, scalar, "tan_p")


def beta_via_gamma(alpha, beta):
    """Euler Beta function from log-Gamma."""
    alpha = float(alpha)
    beta = float(beta)
    if not (alpha > 0 and beta > 0):
        raise DomainError("beta requires positive arguments")
    return math.exp(log_gamma(alpha) + log_gamma(beta) - log_gamma(alpha + beta))


def beta_via_ptrig(p, alpha, beta, tol: Tolerance = DEFAULT_TOL):
    """B(alpha, beta) = p int_0^{pi_p/2} sin_p**(p alpha - 1) cos_p**(p beta - p + 1) dt.

    The t-quadrature passes each node's exact distance to pi_p/2 to the
    base-interval evaluator, so negative cos_p exponents are integrated
    without cancellation at the upper end.
    """
    p = check_p(p)
    alpha = float(alpha)
    beta = float(beta)
    if not (alpha > 0 and beta > 0):
        raise DomainError("beta requires positive arguments")
    half = 0.5 * pi_p(p)
    a_exp = p * alpha - 1.0
    b_exp = p * beta - p + 1.0

    def g(s, c):
        t = half * s
        d = half * c
        sn, cs = _base_sincos(p, t, d)
        with np.errstate(divide="ignore"):
            vals = sn**a_exp * cs**b_exp
        return (half * vals)[None, :]

    vals, _ = integrate_unit_batch(g, tol)
    return p * float(vals[0])
