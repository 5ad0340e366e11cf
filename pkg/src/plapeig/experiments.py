"""Parameter sweeps over the bump family and spherical caps, plus the p-limit studies.

Every driver returns a list of :class:`SweepRecord` in input order. A
failure in one record is caught and reported in that record's notes so the
rest of the sweep still runs.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .bounds import (
    barta_certificate,
    capacity_radial,
    mazya_upper,
    sinp_barta_profile,
    theorem_lower_bound,
)
from .eigensolver import (
    RadialEigenProblem,
    rayleigh_quotient,
    rayleigh_upper,
    sharpness_upper_bound,
    solve_first_eigenvalue,
)
from .errors import DomainError, PlapeigError
from .geometry import (
    PaperBump,
    RadialDomain,
    Spherical,
    diameter_bounds,
    sharpness_radius,
    volume_ball,
)
from .ptrig import check_p, pi_p

__all__ = [
    "SweepRecord",
    "CSV_HEADER",
    "DEFAULT_EPS",
    "run_sharpness_sweep",
    "run_sphere_sweep",
    "run_limit_studies",
    "plateau_ramp_quotient",
    "log_ramp_quotient",
    "loglog_slope",
    "records_to_csv",
    "records_to_json",
]

CSV_HEADER = [
    "experiment",
    "p",
    "n",
    "epsilon",
    "radius",
    "lambda",
    "bound",
    "ratio",
    "diam_lo",
    "diam_hi",
    "upper",
    "notes",
]
DEFAULT_EPS = (0.2, 0.1, 0.05)
NAN = float("nan")


@dataclass
class SweepRecord:
    experiment: str
    p: float
    n: int
    epsilon: Optional[float]
    radius: float
    lam: float
    bound: float
    ratio: float
    diam_lo: float
    diam_hi: float
    upper: float = NAN
    extra: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return "error" not in self.extra

    def notes(self) -> str:
        parts = []
        for k, v in self.extra.items():
            parts.append(f"{k}={_fmt(v)}")
        return ";".join(parts)

    def row(self) -> list:
        return [
            self.experiment,
            _fmt(self.p),
            str(self.n),
            "" if self.epsilon is None else _fmt(self.epsilon),
            _fmt(self.radius),
            _fmt(self.lam),
            _fmt(self.bound),
            _fmt(self.ratio),
            _fmt(self.diam_lo),
            _fmt(self.diam_hi),
            _fmt(self.upper),
            self.notes(),
        ]

    def to_dict(self) -> dict:
        return {
            "experiment": self.experiment,
            "p": self.p,
            "n": self.n,
            "epsilon": self.epsilon,
            "radius": self.radius,
            "lambda": self.lam,
            "bound": self.bound,
            "ratio": self.ratio,
            "diam_lo": self.diam_lo,
            "diam_hi": self.diam_hi,
            "upper": self.upper,
            "notes": self.notes(),
        }


def _fmt(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()


def records_to_json(records) -> str:
    return json.dumps([r.to_dict() for r in records], indent=2, allow_nan=True)


def _run_all(fn, jobs, workers):
    if workers and workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, jobs))
    return [fn(j) for j in jobs]


def _failed(experiment, p, n, eps, err) -> SweepRecord:
    return SweepRecord(experiment, p, n, eps, NAN, NAN, NAN, NAN, NAN, NAN, NAN, {"error": str(err)})


# --------------------------------------------------------------------------
# sharpness family
# --------------------------------------------------------------------------


def _sharpness_one(job):
    p, n, eps = job
    try:
        r = sharpness_radius(eps)
        dom = RadialDomain(PaperBump(eps=eps), n, r)
        prob = RadialEigenProblem(p, dom)
        lam = solve_first_eigenvalue(prob).lam
        d_lo, d_hi = diameter_bounds(dom)
        bound = theorem_lower_bound(p, d_hi)
        limit = theorem_lower_bound(p, 2.0)
        proxy = (p - 1.0) * (pi_p(p) / (2.0 * r)) ** p
        extra = {
            "limit": limit,
            "ratio_limit": lam / limit,
            "proxy_1d": proxy,
            "proxy_rel": abs(lam / proxy - 1.0),
            "barta": barta_certificate(prob, sinp_barta_profile(prob)),
            "rayleigh": rayleigh_upper(prob),
            "domain": "o-centered ball",
        }
        return SweepRecord(
            "sharpness", p, n, eps, r, lam, bound, lam / bound, d_lo, d_hi,
            sharpness_upper_bound(p, eps, n), extra,
        )
    except PlapeigError as err:
        return _failed("sharpness", p, n, eps, err)


def run_sharpness_sweep(p: float, n: int = 3, eps_list=DEFAULT_EPS, workers: int = 1):
    """lambda on B(o, r_eps) for the bump family, against the diameter bound."""
    p = check_p(p)
    return _run_all(_sharpness_one, [(p, n, float(e)) for e in eps_list], workers)


# --------------------------------------------------------------------------
# spherical caps
# --------------------------------------------------------------------------


def plateau_ramp_quotient(p: float, n: int, eps: float) -> float:
    """Quotient of v = 1 up to pi - 2 eps, then linear down to 0 at pi - eps."""
    prob = _cap_problem(p, n, eps)
    R = prob.R
    knee = math.pi - 2.0 * eps

    def v(r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= knee, 1.0, (R - r) / eps)

    def dv(r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= knee, 0.0, -1.0 / eps)

    return rayleigh_quotient(prob, v, dv, breakpoints=(knee,))


def log_ramp_quotient(p: float, n: int, eps: float) -> float:
    """Quotient of v = 1 up to pi/2, then (ln(pi - r) - ln eps)/(ln(pi/2) - ln eps)."""
    if not eps < math.pi / 2:
        raise DomainError("epsilon too large for the logarithmic ramp")
    prob = _cap_problem(p, n, eps)
    den = math.log(math.pi / 2) - math.log(eps)
    knee = math.pi / 2

    def v(r):
        r = np.asarray(r, dtype=float)
        ramp = (np.log(np.maximum(math.pi - r, eps)) - math.log(eps)) / den
        return np.where(r <= knee, 1.0, ramp)

    def dv(r):
        r = np.asarray(r, dtype=float)
        return np.where(r <= knee, 0.0, -1.0 / ((math.pi - r) * den))

    return rayleigh_quotient(prob, v, dv, breakpoints=(knee,))


def _cap_problem(p, n, eps):
    if not 0 < eps < math.pi:
        raise DomainError("epsilon must lie in (0, pi)")
    return RadialEigenProblem(p, RadialDomain(Spherical(), n, math.pi - eps))


def _sphere_one(job):
    p, n, eps = job
    try:
        prob = _cap_problem(p, n, eps)
        lam = solve_first_eigenvalue(prob).lam
        d_lo, d_hi = diameter_bounds(prob.domain)
        bound = theorem_lower_bound(p, d_hi)
        extra = {"compact": True}
        uppers = []
        if p < n:
            q = plateau_ramp_quotient(p, n, eps)
            extra["plateau_ramp"] = q
            uppers.append(q)
        if abs(p - n) < 1e-12:
            q = log_ramp_quotient(p, n, eps)
            extra["log_ramp"] = q
            uppers.append(q)
        if p > n:
            extra["flag"] = "no decay expected"
        if n == 3 and p == 2.0:
            exact = (math.pi / (math.pi - eps)) ** 2 - 1.0
            extra["exact"] = exact
        extra["barta"] = barta_certificate(prob, sinp_barta_profile(prob))
        upper = min(uppers) if uppers else rayleigh_upper(prob)
        return SweepRecord("sphere", p, n, eps, prob.R, lam, bound, lam / bound, d_lo, d_hi, upper, extra)
    except PlapeigError as err:
        return _failed("sphere", p, n, eps, err)


def run_sphere_sweep(p: float, n: int = 3, eps_list=(0.3, 0.2, 0.1, 0.05), workers: int = 1):
    """lambda on the spherical cap [0, pi - eps], with the decaying test quotients."""
    p = check_p(p)
    return _run_all(_sphere_one, [(p, n, float(e)) for e in eps_list], workers)


def loglog_slope(records) -> float:
    """Least-squares slope of ln lambda against ln epsilon."""
    x = np.log([r.epsilon for r in records])
    y = np.log([r.lam for r in records])
    return float(np.polyfit(x, y, 1)[0])


# --------------------------------------------------------------------------
# p -> 1 and p -> infinity
# --------------------------------------------------------------------------


def _limit_one(job):
    kind, domain, p = job
    n = domain.dimension
    R = float(domain.outer_radius)
    try:
        prob = RadialEigenProblem(p, domain)
        lam = solve_first_eigenvalue(prob).lam
        d_lo, d_hi = diameter_bounds(domain)
        bound = theorem_lower_bound(p, d_hi)
        if kind == "limit_p1":
            t = 0.5 * R
            cap = capacity_radial(domain, t, p)
            vol = volume_ball(domain, t)
            extra = {
                "t": t,
                "cap": cap,
                "vol": vol,
                "bound_vol_lt_cap": bound * vol < cap,
            }
            upper = mazya_upper(domain, t, p)
        else:
            root = lam ** (1.0 / p)
            extra = {
                "root": root,
                "root_floor": bound ** (1.0 / p),
                "inv_diam": 1.0 / d_hi,
                "inv_inradius": 1.0 / R,
            }
            upper = rayleigh_upper(prob)
        return SweepRecord(kind, p, n, None, R, lam, bound, lam / bound, d_lo, d_hi, upper, extra)
    except PlapeigError as err:
        return _failed(kind, p, n, None, err)


def run_limit_studies(domain: RadialDomain, p_low_list=(1.3, 1.2, 1.1), p_high_list=(10.0, 20.0, 40.0), workers: int = 1):
    """p -> 1 capacity coherence records, then p -> infinity root records."""
    jobs = [("limit_p1", domain, check_p(p)) for p in p_low_list]
    jobs += [("limit_pinf", domain, check_p(p)) for p in p_high_list]
    return _run_all(_limit_one, jobs, workers)
