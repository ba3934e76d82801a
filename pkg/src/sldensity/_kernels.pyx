# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled shooting kernels; mirrors ``_pykernels`` signature for signature."""
import numpy as np

from libc.math cimport sin, cos, sinh, cosh, sqrt, exp, fabs, pow, ldexp, isfinite

BACKEND = "cython"
# (y, y') is divided by 2**RESCALE_BITS whenever it exceeds that size
DEF RESCALE_BITS = 600
RESCALE = RESCALE_BITS


cdef inline double _q(double q0, double q1, const double* poly, int npoly,
                      double amp, double x) noexcept nogil:
    cdef double v = 0.0
    cdef int k
    for k in range(npoly - 1, -1, -1):
        v = v * x + poly[k]
    if amp != 0.0:
        v += amp * x * x * exp(-x)
    return q0 / (x * x) + q1 / x + v


cdef inline void _prop(double w2, double h, double* y, double* dy) noexcept nogil:
    # exact propagator of y'' = -w2 y over a step of length h
    cdef double z = -w2 * h * h
    cdef double c, s, d, om, t
    if fabs(z) < 1e-8:
        c = 1.0 + z * (0.5 + z * (1.0 / 24.0 + z / 720.0))
        s = h * (1.0 + z * (1.0 / 6.0 + z * (1.0 / 120.0 + z / 5040.0)))
        d = -w2 * s
    elif w2 > 0.0:
        om = sqrt(w2)
        t = sin(om * h)
        c = cos(om * h)
        s = t / om
        d = -om * t
    else:
        om = sqrt(-w2)
        t = sinh(om * h)
        c = cosh(om * h)
        s = t / om
        d = om * t
    t = c * y[0] + s * dy[0]
    dy[0] = d * y[0] + c * dy[0]
    y[0] = t


def _as_poly(poly):
    return np.ascontiguousarray(poly, dtype=np.float64).reshape(-1)


def step(double q0, double q1, poly, double amp, double lam,
         double x, double y, double dy, double h):
    """Single midpoint-coefficient step from x to x + h."""
    cdef double[::1] pv = _as_poly(poly)
    cdef int npoly = pv.shape[0]
    cdef const double* pp = &pv[0] if npoly > 0 else NULL
    cdef double qb = _q(q0, q1, pp, npoly, amp, x + 0.5 * h)
    _prop(lam - qb, h, &y, &dy)
    return y, dy


def propagate(double q0, double q1, poly, double amp, double lam,
              double x, double y, double dy, double x_end, double tol,
              double h0, double hmin_rel=1e-12, long max_steps=50000000):
    """Adaptive step-doubling integration from x to x_end.

    Returns (x, y, dy, n_accepted, n_rejected, h_next, status, n_rescaled);
    status 0 on success, 1 when the step size underflowed, 2 when max_steps
    was hit, 3 on a non-finite state.  The true solution is (y, dy) times
    2**(RESCALE * n_rescaled).
    """
    cdef double[::1] pv = _as_poly(poly)
    cdef int npoly = pv.shape[0]
    cdef const double* pp = &pv[0] if npoly > 0 else NULL
    cdef double h = h0, hs, y1, d1, y2, d2, qa, qb, qc, w, sw, err, scale, fac
    cdef long nacc = 0, nrej = 0, nscale = 0
    cdef double big = ldexp(1.0, RESCALE_BITS)
    cdef int status = 0
    cdef bint last
    cdef double h_next = h0
    with nogil:
        while x < x_end:
            last = x + h >= x_end
            hs = x_end - x if last else h
            qa = _q(q0, q1, pp, npoly, amp, x + 0.5 * hs)
            qb = _q(q0, q1, pp, npoly, amp, x + 0.25 * hs)
            qc = _q(q0, q1, pp, npoly, amp, x + 0.75 * hs)
            y1 = y
            d1 = dy
            _prop(lam - qa, hs, &y1, &d1)
            y2 = y
            d2 = dy
            _prop(lam - qb, 0.5 * hs, &y2, &d2)
            _prop(lam - qc, 0.5 * hs, &y2, &d2)
            w = fabs(lam - qa)
            if lam > w:
                w = lam
            if w <= 0.0:
                w = 1.0 / (x * x)
            sw = sqrt(w)
            err = fabs(y2 - y1)
            if fabs(d2 - d1) / sw > err:
                err = fabs(d2 - d1) / sw
            err = err / 3.0
            scale = fabs(y2)
            if fabs(d2) / sw > scale:
                scale = fabs(d2) / sw
            if err <= tol * scale:
                y = y2 + (y2 - y1) / 3.0
                dy = d2 + (d2 - d1) / 3.0
                x = x_end if last else x + hs
                nacc += 1
                if fabs(y) > big or fabs(dy) > big:
                    y = ldexp(y, -RESCALE_BITS)
                    dy = ldexp(dy, -RESCALE_BITS)
                    nscale += 1
                if err == 0.0:
                    fac = 4.0
                else:
                    fac = 0.9 * pow(tol * scale / err, 1.0 / 3.0)
                    if fac > 4.0:
                        fac = 4.0
                if not last or hs >= h:
                    h = hs * fac
                h_next = h
                if nacc >= max_steps:
                    status = 2
                    break
            elif not (isfinite(err) and isfinite(scale)):
                status = 3
                break
            else:
                nrej += 1
                fac = 0.9 * pow(tol * scale / err, 1.0 / 3.0)
                if fac < 0.1:
                    fac = 0.1
                h = hs * fac
                if h < hmin_rel * x:
                    status = 1
                    break
    return x, y, dy, nacc, nrej, h_next, status, nscale
