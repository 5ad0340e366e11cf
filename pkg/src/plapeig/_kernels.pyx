# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled shooting kernel (mirror of ``_pykernels.py``)."""

from libc.math cimport sin, sqrt, fabs, pow, copysign, isfinite, fmax, fmin

from plapeig.errors import ODEError

BACKEND = "cython"

cdef double _EPS = 2.220446049250313e-16

cdef double A21 = 1.0 / 5
cdef double A31 = 3.0 / 40, A32 = 9.0 / 40
cdef double A41 = 44.0 / 45, A42 = -56.0 / 15, A43 = 32.0 / 9
cdef double A51 = 19372.0 / 6561, A52 = -25360.0 / 2187, A53 = 64448.0 / 6561, A54 = -212.0 / 729
cdef double A61 = 9017.0 / 3168, A62 = -355.0 / 33, A63 = 46732.0 / 5247, A64 = 49.0 / 176, A65 = -5103.0 / 18656
cdef double B1 = 35.0 / 384, B3 = 500.0 / 1113, B4 = 125.0 / 192, B5 = -2187.0 / 6784, B6 = 11.0 / 84
cdef double E1 = -71.0 / 57600, E3 = 71.0 / 16695, E4 = -71.0 / 1920
cdef double E5 = 17253.0 / 339200, E6 = -22.0 / 525, E7 = 1.0 / 40
cdef double C2 = 1.0 / 5, C3 = 3.0 / 10, C4 = 4.0 / 5, C5 = 8.0 / 9

cdef double[4] P1 = [1.0, -8048581381.0 / 2820520608, 8663915743.0 / 2820520608, -12715105075.0 / 11282082432]
cdef double[4] P3 = [0.0, 131558114200.0 / 32700410799, -68118460800.0 / 10900136933, 87487479700.0 / 32700410799]
cdef double[4] P4 = [0.0, -1754552775.0 / 470086768, 14199869525.0 / 1410260304, -10690763975.0 / 1880347072]
cdef double[4] P5 = [0.0, 127303824393.0 / 49829197408, -318862633887.0 / 49829197408, 701980252875.0 / 199316789632]
cdef double[4] P6 = [0.0, -282668133.0 / 205662961, 2019193451.0 / 616988883, -1453857185.0 / 822651844]
cdef double[4] P7 = [0.0, 40617522.0 / 29380423, -110615467.0 / 29380423, 69997945.0 / 29380423]

cdef double SAFETY = 0.9
cdef double MIN_FACTOR = 0.2
cdef double MAX_FACTOR = 10.0
cdef int MAX_EVENT_BISECTIONS = 80
cdef long MAX_STEPS = 2000000


cdef struct Prob:
    int kind
    double scale
    double wexp
    double p
    double inv_pm1
    double lam
    const double* tx
    const double* ty
    const double* td
    int n


cdef inline double profile_f(const Prob* pr, double r) noexcept nogil:
    cdef double x, h, t, omt
    cdef int lo, hi, mid, n
    if pr.kind == 0:
        return 1.0
    if pr.kind == 1:
        return r
    x = r / pr.scale
    if pr.kind == 2:
        return pr.scale * sin(x)
    n = pr.n
    if x >= pr.tx[n - 1]:
        return pr.scale * pr.ty[n - 1]
    if x <= pr.tx[0]:
        return pr.scale * pr.ty[0]
    lo = 0
    hi = n - 1
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if pr.tx[mid] <= x:
            lo = mid
        else:
            hi = mid
    h = pr.tx[lo + 1] - pr.tx[lo]
    t = (x - pr.tx[lo]) / h
    omt = 1.0 - t
    return pr.scale * (
        (1.0 + 2.0 * t) * omt * omt * pr.ty[lo]
        + t * omt * omt * pr.td[lo] * h
        + t * t * (3.0 - 2.0 * t) * pr.ty[lo + 1]
        + t * t * (t - 1.0) * pr.td[lo + 1] * h
    )


cdef inline int rhs(const Prob* pr, double r, double u, double w,
                    double* up, double* wp) noexcept nogil:
    """Returns 1 if the warping function vanished."""
    cdef double W = 1.0, f, a, au
    if pr.kind != 0 and pr.wexp != 0.0:
        f = profile_f(pr, r)
        if not f > 0.0:
            return 1
        W = pow(f, pr.wexp)
    a = fabs(w) / W
    up[0] = copysign(pow(a, pr.inv_pm1), w) if a > 0.0 else 0.0
    au = fabs(u)
    wp[0] = -pr.lam * W * copysign(pow(au, pr.p - 1.0), u) if au > 0.0 else 0.0
    return 0


cdef inline double norm2(double a, double b, double sa, double sb) noexcept nogil:
    return sqrt(0.5 * ((a / sa) * (a / sa) + (b / sb) * (b / sb)))


cdef inline void dense(double u, double w, double h, double* k1, double* k3,
                       double* k4, double* k5, double* k6, double* k7,
                       double theta, double* uu, double* ww) noexcept nogil:
    cdef double t2 = theta * theta
    cdef double t3 = t2 * theta
    cdef double t4 = t3 * theta
    cdef double b1 = P1[0] * theta + P1[1] * t2 + P1[2] * t3 + P1[3] * t4
    cdef double b3 = P3[1] * t2 + P3[2] * t3 + P3[3] * t4
    cdef double b4 = P4[1] * t2 + P4[2] * t3 + P4[3] * t4
    cdef double b5 = P5[1] * t2 + P5[2] * t3 + P5[3] * t4
    cdef double b6 = P6[1] * t2 + P6[2] * t3 + P6[3] * t4
    cdef double b7 = P7[1] * t2 + P7[2] * t3 + P7[3] * t4
    uu[0] = u + h * (b1 * k1[0] + b3 * k3[0] + b4 * k4[0] + b5 * k5[0] + b6 * k6[0] + b7 * k7[0])
    ww[0] = w + h * (b1 * k1[1] + b3 * k3[1] + b4 * k4[1] + b5 * k5[1] + b6 * k6[1] + b7 * k7[1])


def shoot_radial(int kind, double scale, double wexp, double p, double lam,
                 double r0, double r1, double u0, double w0,
                 const double[::1] tx, const double[::1] ty, const double[::1] td,
                 double rtol, double atol, bint record=False):
    """Integrate from r0 toward r1; stop at the first sign change of u.

    Same contract as ``_pykernels.shoot_radial``.
    """
    cdef Prob pr
    pr.kind = kind
    pr.scale = scale
    pr.wexp = wexp
    pr.p = p
    pr.inv_pm1 = 1.0 / (p - 1.0)
    pr.lam = lam
    pr.tx = &tx[0]
    pr.ty = &ty[0]
    pr.td = &td[0]
    pr.n = tx.shape[0]

    cdef double r = r0, u = u0, w = w0
    cdef double k1[2]
    cdef double k2[2]
    cdef double k3[2]
    cdef double k4[2]
    cdef double k5[2]
    cdef double k6[2]
    cdef double k7[2]
    cdef double g[2]
    cdef double su, sw, d0, d1, d2, h0, h1, h, un, wn, eu, ew, err, factor
    cdef double ref, lo_t, hi_t, mid, um, wm, theta, re, ue, we
    cdef long nsteps = 0, nrej = 0
    cdef int i
    cdef bint rejected_last = False
    rs = []
    us = []
    ws = []

    if rhs(&pr, r, u, w, &k1[0], &k1[1]):
        raise ODEError("non-finite state: warping function vanished")
    if record:
        rs.append(r)
        us.append(u)
        ws.append(w)

    su = atol + rtol * fabs(u)
    sw = atol + rtol * fabs(w)
    d0 = norm2(u, w, su, sw)
    d1 = norm2(k1[0], k1[1], su, sw)
    if d0 < 1e-5 or d1 < 1e-5:
        h0 = 1e-6
    else:
        h0 = 0.01 * d0 / d1
    h0 = fmin(h0, r1 - r0)
    if rhs(&pr, r + h0, u + h0 * k1[0], w + h0 * k1[1], &g[0], &g[1]):
        raise ODEError("non-finite state: warping function vanished")
    d2 = norm2(g[0] - k1[0], g[1] - k1[1], su, sw) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = fmax(1e-6, h0 * 1e-3)
    else:
        h1 = pow(0.01 / fmax(d1, d2), 0.2)
    h = fmin(fmin(100.0 * h0, h1), r1 - r0)

    ref = 0.0 if u == 0.0 else copysign(1.0, u)
    while r < r1:
        if nsteps + nrej > MAX_STEPS:
            raise ODEError("stiff or singular: step budget exhausted")
        if h < 10.0 * _EPS * fmax(fabs(r), 1.0):
            raise ODEError("stiff or singular: step size underflow")
        if r + h > r1 or r1 - (r + h) < 10.0 * _EPS * fabs(r1):
            h = r1 - r
        if (rhs(&pr, r + C2 * h, u + h * A21 * k1[0], w + h * A21 * k1[1], &k2[0], &k2[1])
            or rhs(&pr, r + C3 * h,
                   u + h * (A31 * k1[0] + A32 * k2[0]),
                   w + h * (A31 * k1[1] + A32 * k2[1]), &k3[0], &k3[1])
            or rhs(&pr, r + C4 * h,
                   u + h * (A41 * k1[0] + A42 * k2[0] + A43 * k3[0]),
                   w + h * (A41 * k1[1] + A42 * k2[1] + A43 * k3[1]), &k4[0], &k4[1])
            or rhs(&pr, r + C5 * h,
                   u + h * (A51 * k1[0] + A52 * k2[0] + A53 * k3[0] + A54 * k4[0]),
                   w + h * (A51 * k1[1] + A52 * k2[1] + A53 * k3[1] + A54 * k4[1]), &k5[0], &k5[1])
            or rhs(&pr, r + h,
                   u + h * (A61 * k1[0] + A62 * k2[0] + A63 * k3[0] + A64 * k4[0] + A65 * k5[0]),
                   w + h * (A61 * k1[1] + A62 * k2[1] + A63 * k3[1] + A64 * k4[1] + A65 * k5[1]),
                   &k6[0], &k6[1])):
            raise ODEError("non-finite state: warping function vanished")
        un = u + h * (B1 * k1[0] + B3 * k3[0] + B4 * k4[0] + B5 * k5[0] + B6 * k6[0])
        wn = w + h * (B1 * k1[1] + B3 * k3[1] + B4 * k4[1] + B5 * k5[1] + B6 * k6[1])
        if not (isfinite(un) and isfinite(wn)):
            nrej += 1
            h *= MIN_FACTOR
            rejected_last = True
            continue
        if rhs(&pr, r + h, un, wn, &k7[0], &k7[1]):
            raise ODEError("non-finite state: warping function vanished")
        eu = h * (E1 * k1[0] + E3 * k3[0] + E4 * k4[0] + E5 * k5[0] + E6 * k6[0] + E7 * k7[0])
        ew = h * (E1 * k1[1] + E3 * k3[1] + E4 * k4[1] + E5 * k5[1] + E6 * k6[1] + E7 * k7[1])
        su = atol + rtol * fmax(fabs(u), fabs(un))
        sw = atol + rtol * fmax(fabs(w), fabs(wn))
        err = norm2(eu, ew, su, sw)
        if err > 1.0:
            nrej += 1
            h *= fmax(MIN_FACTOR, SAFETY * pow(err, -0.2))
            rejected_last = True
            continue
        nsteps += 1
        if ref == 0.0:
            if un != 0.0:
                ref = copysign(1.0, un)
        elif un * ref <= 0.0:
            lo_t = 0.0
            hi_t = 1.0
            for i in range(MAX_EVENT_BISECTIONS):
                if (hi_t - lo_t) * h <= fmax(atol, 2.0 * _EPS * fabs(r)):
                    break
                mid = 0.5 * (lo_t + hi_t)
                dense(u, w, h, k1, k3, k4, k5, k6, k7, mid, &um, &wm)
                if um * ref > 0.0:
                    lo_t = mid
                else:
                    hi_t = mid
            theta = 0.5 * (lo_t + hi_t)
            re = r + theta * h
            dense(u, w, h, k1, k3, k4, k5, k6, k7, theta, &ue, &we)
            if rhs(&pr, re, ue, we, &g[0], &g[1]):
                raise ODEError("non-finite state: warping function vanished")
            if record:
                rs.append(re)
                us.append(ue)
                ws.append(we)
            return 1, re, ue, we, g[0], nsteps, nrej, rs, us, ws
        r = r + h if r + h < r1 else r1
        u = un
        w = wn
        k1[0] = k7[0]
        k1[1] = k7[1]
        if record:
            rs.append(r)
            us.append(u)
            ws.append(w)
        if err == 0.0:
            factor = MAX_FACTOR
        else:
            factor = fmin(MAX_FACTOR, SAFETY * pow(err, -0.2))
        if rejected_last:
            factor = fmin(factor, 1.0)
        rejected_last = False
        h *= factor
    return 0, r, u, w, k1[0], nsteps, nrej, rs, us, ws
