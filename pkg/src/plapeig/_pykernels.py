"""Pure-Python shooting kernel.

Line-for-line mirror of ``_kernels.pyx``; used when the compiled extension
is not available. Integrates the half-linear radial system

    u' = sign(w) (|w| / W)**(1/(p-1)),    w' = -lam W |u|**(p-2) u,

with ``W = f(r)**wexp``, by Dormand-Prince 5(4) and stops at the first sign
change of ``u`` (located by bisection on the quartic dense output).
"""

import math

from .errors import ODEError

BACKEND = "python"

_EPS = 2.220446049250313e-16

# Dormand-Prince 5(4)
A21 = 1 / 5
A31, A32 = 3 / 40, 9 / 40
A41, A42, A43 = 44 / 45, -56 / 15, 32 / 9
A51, A52, A53, A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
A61, A62, A63, A64, A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
B1, B3, B4, B5, B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
E1, E3, E4, E5, E6, E7 = (
    -71 / 57600,
    71 / 16695,
    -71 / 1920,
    17253 / 339200,
    -22 / 525,
    1 / 40,
)
C2, C3, C4, C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
P1 = (1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432)
P3 = (0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799)
P4 = (0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072)
P5 = (0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632)
P6 = (0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844)
P7 = (0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423)

SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 10.0
MAX_EVENT_BISECTIONS = 80
MAX_STEPS = 2_000_000


def profile_f(kind, scale, r, tx, ty, td):
    if kind == 0:
        return 1.0
    if kind == 1:
        return r
    x = r / scale
    if kind == 2:
        return scale * math.sin(x)
    n = len(tx)
    if x >= tx[n - 1]:
        return scale * ty[n - 1]
    if x <= tx[0]:
        return scale * ty[0]
    lo, hi = 0, n - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if tx[mid] <= x:
            lo = mid
        else:
            hi = mid
    h = tx[lo + 1] - tx[lo]
    t = (x - tx[lo]) / h
    omt = 1.0 - t
    val = (
        (1.0 + 2.0 * t) * omt * omt * ty[lo]
        + t * omt * omt * td[lo] * h
        + t * t * (3.0 - 2.0 * t) * ty[lo + 1]
        + t * t * (t - 1.0) * td[lo + 1] * h
    )
    return scale * val


def weight(kind, scale, wexp, r, tx, ty, td):
    if kind == 0 or wexp == 0.0:
        return 1.0
    f = profile_f(kind, scale, r, tx, ty, td)
    if not f > 0.0:
        raise ODEError("non-finite state: warping function vanished")
    return f**wexp


def _rhs(kind, scale, wexp, p, lam, r, u, w, tx, ty, td):
    W = weight(kind, scale, wexp, r, tx, ty, td)
    a = abs(w) / W
    up = math.copysign(a ** (1.0 / (p - 1.0)), w) if a > 0.0 else 0.0
    au = abs(u)
    wp = -lam * W * math.copysign(au ** (p - 1.0), u) if au > 0.0 else 0.0
    return up, wp


def _dense(u, w, h, k1, k3, k4, k5, k6, k7, theta):
    t2 = theta * theta
    t3 = t2 * theta
    t4 = t3 * theta
    b1 = P1[0] * theta + P1[1] * t2 + P1[2] * t3 + P1[3] * t4
    b3 = P3[1] * t2 + P3[2] * t3 + P3[3] * t4
    b4 = P4[1] * t2 + P4[2] * t3 + P4[3] * t4
    b5 = P5[1] * t2 + P5[2] * t3 + P5[3] * t4
    b6 = P6[1] * t2 + P6[2] * t3 + P6[3] * t4
    b7 = P7[1] * t2 + P7[2] * t3 + P7[3] * t4
    uu = u + h * (b1 * k1[0] + b3 * k3[0] + b4 * k4[0] + b5 * k5[0] + b6 * k6[0] + b7 * k7[0])
    ww = w + h * (b1 * k1[1] + b3 * k3[1] + b4 * k4[1] + b5 * k5[1] + b6 * k6[1] + b7 * k7[1])
    return uu, ww


def _norm2(a, b, sa, sb):
    return math.sqrt(0.5 * ((a / sa) ** 2 + (b / sb) ** 2))


def shoot_radial(kind, scale, wexp, p, lam, r0, r1, u0, w0, tx, ty, td, rtol, atol, record=False):
    """Integrate from r0 toward r1; stop at the first sign change of u.

    Returns ``(status, r, u, w, du, nsteps, nrejected, rs, us, ws)`` where
    ``status`` is 1 for an event and 0 for reaching ``r1``; ``du`` is u' at
    the returned point. Trajectory lists are empty unless ``record``.
    """
    args = (kind, scale, wexp, p, lam)
    tabs = (tx, ty, td)
    r = r0
    u = u0
    w = w0
    f1 = _rhs(*args, r, u, w, *tabs)
    rs, us, ws = [], [], []
    if record:
        rs.append(r)
        us.append(u)
        ws.append(w)

    # initial step (Hairer, Norsett & Wanner)
    su = atol + rtol * abs(u)
    sw = atol + rtol * abs(w)
    d0 = _norm2(u, w, su, sw)
    d1 = _norm2(f1[0], f1[1], su, sw)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = min(h0, r1 - r0)
    g = _rhs(*args, r + h0, u + h0 * f1[0], w + h0 * f1[1], *tabs)
    d2 = _norm2(g[0] - f1[0], g[1] - f1[1], su, sw) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    h = min(100.0 * h0, h1, r1 - r0)

    ref = 0.0 if u == 0.0 else math.copysign(1.0, u)
    nsteps = 0
    nrej = 0
    rejected_last = False
    while r < r1:
        if nsteps + nrej > MAX_STEPS:
            raise ODEError("stiff or singular: step budget exhausted")
        if h < 10.0 * _EPS * max(abs(r), 1.0):
            raise ODEError("stiff or singular: step size underflow")
        if r + h > r1 or r1 - (r + h) < 10.0 * _EPS * abs(r1):
            h = r1 - r
        k1 = f1
        k2 = _rhs(*args, r + C2 * h, u + h * A21 * k1[0], w + h * A21 * k1[1], *tabs)
        k3 = _rhs(
            *args,
            r + C3 * h,
            u + h * (A31 * k1[0] + A32 * k2[0]),
            w + h * (A31 * k1[1] + A32 * k2[1]),
            *tabs,
        )
        k4 = _rhs(
            *args,
            r + C4 * h,
            u + h * (A41 * k1[0] + A42 * k2[0] + A43 * k3[0]),
            w + h * (A41 * k1[1] + A42 * k2[1] + A43 * k3[1]),
            *tabs,
        )
        k5 = _rhs(
            *args,
            r + C5 * h,
            u + h * (A51 * k1[0] + A52 * k2[0] + A53 * k3[0] + A54 * k4[0]),
            w + h * (A51 * k1[1] + A52 * k2[1] + A53 * k3[1] + A54 * k4[1]),
            *tabs,
        )
        k6 = _rhs(
            *args,
            r + h,
            u + h * (A61 * k1[0] + A62 * k2[0] + A63 * k3[0] + A64 * k4[0] + A65 * k5[0]),
            w + h * (A61 * k1[1] + A62 * k2[1] + A63 * k3[1] + A64 * k4[1] + A65 * k5[1]),
            *tabs,
        )
        un = u + h * (B1 * k1[0] + B3 * k3[0] + B4 * k4[0] + B5 * k5[0] + B6 * k6[0])
        wn = w + h * (B1 * k1[1] + B3 * k3[1] + B4 * k4[1] + B5 * k5[1] + B6 * k6[1])
        if not (math.isfinite(un) and math.isfinite(wn)):
            nrej += 1
            h *= MIN_FACTOR
            rejected_last = True
            continue
        k7 = _rhs(*args, r + h, un, wn, *tabs)
        eu = h * (E1 * k1[0] + E3 * k3[0] + E4 * k4[0] + E5 * k5[0] + E6 * k6[0] + E7 * k7[0])
        ew = h * (E1 * k1[1] + E3 * k3[1] + E4 * k4[1] + E5 * k5[1] + E6 * k6[1] + E7 * k7[1])
        su = atol + rtol * max(abs(u), abs(un))
        sw = atol + rtol * max(abs(w), abs(wn))
        err = _norm2(eu, ew, su, sw)
        if err > 1.0:
            nrej += 1
            h *= max(MIN_FACTOR, SAFETY * err**-0.2)
            rejected_last = True
            continue
        nsteps += 1
        if ref == 0.0:
            if un != 0.0:
                ref = math.copysign(1.0, un)
        elif un * ref <= 0.0:
            lo_t = 0.0
            hi_t = 1.0
            for _ in range(MAX_EVENT_BISECTIONS):
                if (hi_t - lo_t) * h <= max(atol, 2.0 * _EPS * abs(r)):
                    break
                mid = 0.5 * (lo_t + hi_t)
                um, _wm = _dense(u, w, h, k1, k3, k4, k5, k6, k7, mid)
                if um * ref > 0.0:
                    lo_t = mid
                else:
                    hi_t = mid
            theta = 0.5 * (lo_t + hi_t)
            re = r + theta * h
            ue, we = _dense(u, w, h, k1, k3, k4, k5, k6, k7, theta)
            due = _rhs(*args, re, ue, we, *tabs)[0]
            if record:
                rs.append(re)
                us.append(ue)
                ws.append(we)
            return 1, re, ue, we, due, nsteps, nrej, rs, us, ws
        r = r + h if r + h < r1 else r1
        u = un
        w = wn
        f1 = k7
        if record:
            rs.append(r)
            us.append(u)
            ws.append(w)
        if err == 0.0:
            factor = MAX_FACTOR
        else:
            factor = min(MAX_FACTOR, SAFETY * err**-0.2)
        if rejected_last:
            factor = min(factor, 1.0)
        rejected_last = False
        h *= factor
    return 0, r, u, w, f1[0], nsteps, nrej, rs, us, ws
