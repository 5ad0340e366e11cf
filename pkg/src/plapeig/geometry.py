"""Warping profiles and radial domains for metrics dr^2 + f(r)^2 dS^{n-1}.

A profile is immutable; scaling by ``c`` produces ``r -> c f(r/c)``, the
warping function of the metric multiplied by ``c**2``. Tabulated data (the
bump profile's pre-integrated cache and user tables) are interpolated by
monotone piecewise-cubic Hermite splines.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import DomainError
from .numerics import DEFAULT_TOL, Tolerance, integrate_panels, unit_sphere_area

__all__ = [
    "KIND_UNIT",
    "KIND_EUCLIDEAN",
    "KIND_SPHERE",
    "KIND_TABLE",
    "WarpingProfile",
    "Euclidean",
    "Spherical",
    "PaperBump",
    "Tabulated",
    "Unit",
    "RadialDomain",
    "REGULAR_CENTER",
    "DIRICHLET",
    "bump_j",
    "bump_j_prime",
    "bump_profile",
    "sharpness_radius",
    "radial_integral",
    "volume_ball",
    "boundary_area",
    "diameter_bounds",
    "ricci_nonneg_check",
    "parse_profile",
    "interval_domain",
]

# kernel codes shared with the compiled and pure-Python shooting kernels
KIND_UNIT = 0
KIND_EUCLIDEAN = 1
KIND_SPHERE = 2
KIND_TABLE = 3

BUMP_NODES = 4096
_EXP_FLOOR = -745.0


# --------------------------------------------------------------------------
# bump function
# --------------------------------------------------------------------------


def _bump_exponent(eps, r):
    # 1/eps^2 + 1/(r^2 - eps^2) combined into one term: the two-factor form
    # overflows for eps below about 0.04.
    r2 = r * r
    e2 = eps * eps
    with np.errstate(divide="ignore", invalid="ignore"):
        return r2 / (e2 * (r2 - e2))


def bump_j(eps, r):
    """Smooth bump equal to 1 at r = 0, decreasing to 0 at r = eps, 0 after."""
    eps = float(eps)
    if not eps > 0:
        raise DomainError("bump_j requires eps > 0")
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    if np.any(r < 0):
        raise DomainError("bump_j requires r >= 0")
    expo = _bump_exponent(eps, r)
    inside = (r < eps) & (expo >= _EXP_FLOOR)
    out = np.where(inside, np.exp(np.where(inside, expo, 0.0)), 0.0)
    return float(out[0]) if scalar else out


def bump_j_prime(eps, r):
    """d/dr bump_j = -2 r j / (r^2 - eps^2)^2 (nonpositive)."""
    scalar = np.ndim(r) == 0
    r = np.atleast_1d(np.asarray(r, dtype=float))
    j = bump_j(eps, r)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.where(j > 0, -2.0 * r * j / (r * r - eps * eps) ** 2, 0.0)
    return float(out[0]) if scalar else out


# --------------------------------------------------------------------------
# monotone cubic Hermite tables
# --------------------------------------------------------------------------


def _limit_slopes(x, y, d):
    """Fritsch-Carlson limiter: keep each cubic piece monotone."""
    d = d.copy()
    h = np.diff(x)
    delta = np.diff(y) / h
    for i in range(delta.size):
        if delta[i] == 0.0:
            d[i] = d[i + 1] = 0.0
            continue
        a = d[i] / delta[i]
        b = d[i + 1] / delta[i]
        s = a * a + b * b
        if s > 9.0:
            tau = 3.0 / math.sqrt(s)
            d[i] = tau * a * delta[i]
            d[i + 1] = tau * b * delta[i]
    return d


def _hermite_eval(x, y, d, r, deriv=0):
    """Evaluate the Hermite spline (or its derivative) at r; constant beyond x[-1]."""
    r = np.asarray(r, dtype=float)
    rc = np.clip(r, x[0], x[-1])
    i = np.clip(np.searchsorted(x, rc, side="right") - 1, 0, x.size - 2)
    h = x[i + 1] - x[i]
    t = (rc - x[i]) / h
    y0, y1, d0, d1 = y[i], y[i + 1], d[i] * h, d[i + 1] * h
    if deriv == 0:
        h00 = (1 + 2 * t) * (1 - t) ** 2
        h10 = t * (1 - t) ** 2
        h01 = t * t * (3 - 2 * t)
        h11 = t * t * (t - 1)
        out = h00 * y0 + h10 * d0 + h01 * y1 + h11 * d1
        return np.where(r > x[-1], y[-1], out)
    g00 = 6 * t * t - 6 * t
    g10 = 3 * t * t - 4 * t + 1
    g01 = -g00
    g11 = 3 * t * t - 2 * t
    out = (g00 * y0 + g10 * d0 + g01 * y1 + g11 * d1) / h
    return np.where(r > x[-1], 0.0, out)


# --------------------------------------------------------------------------
# profiles
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class WarpingProfile:
    """Base class; subclasses define the unscaled shape ``_f``, ``_df``, ``_d2f``."""

    scale: float = 1.0

    tag = "abstract"
    kind = -1
    base_domain_max = math.inf

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise DomainError("profile scale must be positive")

    @property
    def domain_max(self) -> float:
        return self.scale * self.base_domain_max

    def f(self, r):
        return self.scale * self._f(np.asarray(r, dtype=float) / self.scale)

    def df(self, r):
        return self._df(np.asarray(r, dtype=float) / self.scale)

    def d2f(self, r):
        return self._d2f(np.asarray(r, dtype=float) / self.scale) / self.scale

    def scaled(self, c: float) -> "WarpingProfile":
        from dataclasses import replace

        return replace(self, scale=self.scale * float(c))

    def breakpoints(self, a: float, b: float):
        """Interior points of (a, b) where the profile changes character."""
        pts = [self.scale * x for x in self._breaks()]
        return sorted(x for x in pts if a < x < b)

    def _breaks(self):
        return []

    def kernel_table(self):
        empty = np.zeros(2)
        return empty, empty, empty

    @property
    def label(self) -> str:
        return self.tag if self.scale == 1.0 else f"{self.tag}*{self.scale:g}"


@dataclass(frozen=True)
class Unit(WarpingProfile):
    """f = 1: the 1D interval (interval calibration mode only)."""

    tag = "unit"
    kind = KIND_UNIT

    def f(self, r):
        return np.ones_like(np.asarray(r, dtype=float))

    def df(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def d2f(self, r):
        return np.zeros_like(np.asarray(r, dtype=float))

    def scaled(self, c):
        return self


@dataclass(frozen=True)
class Euclidean(WarpingProfile):
    """f(r) = r."""

    tag = "euclidean"
    kind = KIND_EUCLIDEAN

    def _f(self, x):
        return x

    def _df(self, x):
        return np.ones_like(x)

    def _d2f(self, x):
        return np.zeros_like(x)

    def scaled(self, c):
        return self


@dataclass(frozen=True)
class Spherical(WarpingProfile):
    """f(r) = sin r: the round sphere, valid for r < pi."""

    tag = "sphere"
    kind = KIND_SPHERE
    base_domain_max = math.pi

    def _f(self, x):
        return np.sin(x)

    def _df(self, x):
        return np.cos(x)

    def _d2f(self, x):
        return -np.sin(x)


@dataclass(frozen=True)
class PaperBump(WarpingProfile):
    """f_eps(r) = int_0^r j_eps: a spherical cap of size ~eps^2 glued to a thin cylinder.

    ``f`` is pre-integrated on ``BUMP_NODES`` uniform nodes over ``[0, eps]``
    and interpolated; for ``r >= eps`` it equals ``delta = f_eps(eps)``.
    """

    eps: float = 0.1
    scale: float = 1.0

    tag = "bump"
    kind = KIND_TABLE

    def __post_init__(self):
        super().__post_init__()
        if not (self.eps > 0 and math.isfinite(self.eps)):
            raise DomainError("bump profile requires eps > 0")
        self._table  # build eagerly

    @cached_property
    def _table(self):
        eps = float(self.eps)
        x = np.linspace(0.0, eps, BUMP_NODES + 1)
        gx, gw = np.polynomial.legendre.leggauss(8)
        lo = x[:-1, None]
        half = 0.5 * (x[1] - x[0])
        nodes = lo + half * (gx + 1.0)
        cells = np.sum(bump_j(eps, nodes.ravel()).reshape(nodes.shape) * gw, axis=1) * half
        y = np.concatenate(([0.0], np.cumsum(cells)))
        d = _limit_slopes(x, y, bump_j(eps, x))
        for arr in (x, y, d):
            arr.setflags(write=False)
        return x, y, d

    @property
    def delta(self) -> float:
        """f_eps(eps) in the scaled metric."""
        return self.scale * float(self._table[1][-1])

    def _f(self, x):
        tx, ty, td = self._table
        return _hermite_eval(tx, ty, td, x)

    def _df(self, x):
        return bump_j(self.eps, np.maximum(x, 0.0))

    def _d2f(self, x):
        return bump_j_prime(self.eps, np.maximum(x, 0.0))

    def _breaks(self):
        # geometric grading toward the cap, where all the variation lives
        eps = self.eps
        pts = [eps]
        x = eps
        while x > 0.25 * eps * eps:
            x *= 0.5
            pts.append(x)
        return pts

    def kernel_table(self):
        return self._table

    @property
    def label(self) -> str:
        base = f"bump:{self.eps:g}"
        return base if self.scale == 1.0 else f"{base}*{self.scale:g}"


@dataclass(frozen=True)
class Tabulated(WarpingProfile):
    """User-supplied samples (r, f(r)) with r[0] = 0, f[0] = 0."""

    r: tuple = ()
    values: tuple = ()
    scale: float = 1.0

    tag = "table"
    kind = KIND_TABLE

    def __post_init__(self):
        super().__post_init__()
        r = np.asarray(self.r, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if r.ndim != 1 or r.size < 3 or r.size != v.size:
            raise DomainError("tabulated profile needs >= 3 matching samples")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(v))):
            raise DomainError("tabulated profile samples must be finite")
        if np.any(np.diff(r) <= 0):
            raise DomainError("tabulated r must be strictly increasing")
        if r[0] != 0.0 or v[0] != 0.0:
            raise DomainError("tabulated profile must start at (0, 0)")
        if np.any(v[1:] <= 0):
            raise DomainError("tabulated profile must be positive for r > 0")
        self._table

    @classmethod
    def from_csv(cls, path) -> "Tabulated":
        """Read a CSV with header ``r,f``."""
        rs, fs = [], []
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or not {"r", "f"} <= set(reader.fieldnames):
                raise DomainError(f"{path}: expected CSV header 'r,f'")
            for row in reader:
                rs.append(float(row["r"]))
                fs.append(float(row["f"]))
        return cls(r=tuple(rs), values=tuple(fs))

    @property
    def base_domain_max(self):
        return float(self.r[-1])

    @cached_property
    def _table(self):
        from scipy.interpolate import PchipInterpolator

        x = np.asarray(self.r, dtype=float)
        y = np.asarray(self.values, dtype=float)
        d = PchipInterpolator(x, y).derivative()(x)
        for arr in (x, y, d):
            arr.setflags(write=False)
        return x, y, d

    def _f(self, x):
        tx, ty, td = self._table
        return _hermite_eval(tx, ty, td, x)

    def _df(self, x):
        tx, ty, td = self._table
        return _hermite_eval(tx, ty, td, x, deriv=1)

    def _d2f(self, x):
        raise DomainError("insufficient smoothness data for a tabulated profile")

    def _breaks(self):
        return list(self.r[1:-1]) if len(self.r) <= 64 else []

    def kernel_table(self):
        return self._table


def parse_profile(tag: str) -> WarpingProfile:
    """Parse ``euclidean``, ``sphere``, ``bump:<eps>`` or ``table:<path>``."""
    tag = tag.strip()
    if tag == "euclidean":
        return Euclidean()
    if tag in ("sphere", "spherical"):
        return Spherical()
    if tag == "unit":
        return Unit()
    if tag.startswith("bump:"):
        try:
            eps = float(tag[5:])
        except ValueError:
            raise DomainError(f"bad bump parameter in {tag!r}") from None
        return PaperBump(eps=eps)
    if tag.startswith("table:"):
        return Tabulated.from_csv(tag[6:])
    raise DomainError(f"unknown profile {tag!r}")


# --------------------------------------------------------------------------
# domains
# --------------------------------------------------------------------------

REGULAR_CENTER = "regular"
DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class RadialDomain:
    """Geodesic ball of radius ``outer_radius`` about the pole, or an interval.

    ``inner_condition="dirichlet"`` is the interval calibration mode: profile
    must be :class:`Unit`, the domain is ``[inner_radius, outer_radius]`` with
    zero boundary values at both ends.
    """

    profile: WarpingProfile
    dimension: int
    outer_radius: float
    inner_condition: str = REGULAR_CENTER
    inner_radius: float = 0.0

    def __post_init__(self):
        if int(self.dimension) != self.dimension:
            raise DomainError("dimension must be an integer")
        R = float(self.outer_radius)
        if not (R > 0 and math.isfinite(R)):
            raise DomainError("outer radius must be positive")
        if self.inner_condition not in (REGULAR_CENTER, DIRICHLET):
            raise DomainError(f"unknown inner condition {self.inner_condition!r}")
        if self.is_interval:
            if not isinstance(self.profile, Unit):
                raise DomainError("dirichlet inner condition requires the unit profile")
            if not (0 <= self.inner_radius < R):
                raise DomainError("need 0 <= inner_radius < outer_radius")
        else:
            if isinstance(self.profile, Unit):
                raise DomainError("unit profile requires the dirichlet inner condition")
            if self.dimension < 2:
                raise DomainError("dimension must be >= 2")
            if R > self.profile.domain_max * (1 + 1e-14):
                raise DomainError(
                    f"outer radius {R} exceeds profile domain {self.profile.domain_max}"
                )

    @property
    def is_interval(self) -> bool:
        return self.inner_condition == DIRICHLET

    @property
    def start(self) -> float:
        return float(self.inner_radius) if self.is_interval else 0.0

    @property
    def weight_exponent(self) -> float:
        return 0.0 if self.is_interval else float(self.dimension - 1)

    @property
    def omega(self) -> float:
        return 1.0 if self.is_interval else unit_sphere_area(self.dimension)

    @property
    def length(self) -> float:
        return float(self.outer_radius) - self.start

    def weight(self, r):
        """Radial density f(r)^(n-1) (omega excluded)."""
        if self.is_interval:
            return np.ones_like(np.asarray(r, dtype=float))
        return self.profile.f(r) ** self.weight_exponent

    def edges(self, a: float, b: float, base_panels: int = 4):
        pts = [a] + self.profile.breakpoints(a, b) + [b]
        out = []
        for lo, hi in zip(pts[:-1], pts[1:]):
            out.extend(np.linspace(lo, hi, base_panels + 1)[:-1])
        out.append(b)
        return np.array(out)

    def scaled(self, c: float) -> "RadialDomain":
        from dataclasses import replace

        return replace(
            self,
            profile=self.profile.scaled(c),
            outer_radius=self.outer_radius * c,
            inner_radius=self.inner_radius * c,
        )

    @property
    def label(self) -> str:
        if self.is_interval:
            return f"interval[{self.start:g},{self.outer_radius:g}]"
        return f"{self.profile.label} n={self.dimension} R={self.outer_radius:g}"


def interval_domain(length: float, inner: float = 0.0) -> RadialDomain:
    """The interval [inner, inner + length] with Dirichlet conditions at both ends."""
    return RadialDomain(Unit(), 1, inner + length, DIRICHLET, inner)


# --------------------------------------------------------------------------
# radial quantities
# --------------------------------------------------------------------------


def radial_integral(domain: RadialDomain, g, a: float, b: float, tol: Tolerance = DEFAULT_TOL, extra_edges=()):
    """int_a^b g(r) f(r)^(n-1) dr (omega excluded) for vectorized ``g``."""
    if b <= a:
        return 0.0
    edges = domain.edges(a, b)
    if extra_edges:
        edges = np.unique(np.concatenate((edges, [e for e in extra_edges if a < e < b])))
    return integrate_panels(lambda r: g(r) * domain.weight(r), edges, tol)


def _check_radius(domain, t):
    t = float(t)
    if not (domain.start < t <= domain.outer_radius * (1 + 1e-14)):
        raise DomainError(f"radius {t} outside (start, R]")
    return min(t, float(domain.outer_radius))


def volume_ball(domain: RadialDomain, t: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Volume of the concentric ball of radius t: omega int_0^t f^(n-1)."""
    t = _check_radius(domain, t)
    return domain.omega * radial_integral(domain, np.ones_like, domain.start, t, tol)


def boundary_area(domain: RadialDomain, t: float) -> float:
    """Area of the geodesic sphere of radius t: omega f(t)^(n-1)."""
    t = _check_radius(domain, t)
    return domain.omega * float(domain.weight(t))


def bump_profile(eps: float, r):
    """(f_eps(r), f_eps'(r)) from the cached profile."""
    prof = PaperBump(eps=eps)
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise DomainError("bump_profile requires r >= 0")
    f = prof.f(r)
    df = prof.df(r)
    if f.ndim == 0:
        return float(f), float(df)
    return f, df


def sharpness_radius(eps: float) -> float:
    """2 - 2 pi delta - delta with delta = f_eps(eps)."""
    delta = PaperBump(eps=eps).delta
    r = 2.0 - (2.0 * math.pi + 1.0) * delta
    if not r > 0:
        raise DomainError("epsilon too large")
    return r


def diameter_bounds(domain: RadialDomain):
    """Interval (lo, hi) guaranteed to contain the diameter of the domain.

    For a nondecreasing profile, two points at radii ``s1 <= s2 <= t`` are
    joined by an arc of length at most ``pi f(s1)`` on the level sphere of
    ``s1`` plus a radial segment, so ``diam <= min(2t, t + pi f(t))``; the
    distance from the pole to the boundary gives ``diam >= t``.
    """
    t = float(domain.outer_radius)
    prof = domain.profile
    if domain.is_interval:
        return domain.length, domain.length
    if isinstance(prof, Euclidean):
        return 2.0 * t, 2.0 * t
    if isinstance(prof, Spherical):
        d = min(2.0 * t, math.pi * prof.scale)
        return d, d
    if isinstance(prof, (PaperBump, Tabulated)):
        if isinstance(prof, Tabulated):
            grid = np.linspace(0.0, t, 2049)
            if np.any(np.diff(prof.f(grid)) < 0):
                raise DomainError("diameter bounds unavailable: profile not monotone")
        hi = min(2.0 * t, t + math.pi * float(prof.f(t)))
        return t, hi
    raise DomainError("diameter bounds unavailable")


def ricci_nonneg_check(profile: WarpingProfile, grid: int = 2000, r_max: Optional[float] = None, atol: float = 1e-12) -> bool:
    """Sufficient condition f'' <= 0 sampled on (0, r_max]."""
    if isinstance(profile, Tabulated):
        raise DomainError("insufficient smoothness data for a tabulated profile")
    top = profile.domain_max if r_max is None else float(r_max)
    if isinstance(profile, Spherical) and top > math.pi * profile.scale * (1 + 1e-14):
        return False
    if not math.isfinite(top):
        top = 10.0 * profile.scale
    r = np.linspace(0.0, top, int(grid) + 1)[1:]
    if isinstance(profile, Spherical) and top >= math.pi * profile.scale:
        r = r[:-1]
    extra = np.array(profile.breakpoints(0.0, top))
    r = np.concatenate((r, extra)) if extra.size else r
    return bool(np.all(profile.d2f(r) <= atol))
