"""Pure-Python shooting kernels, used when the compiled extension is missing.

Signatures match ``_kernels``; the ``*_fn`` variants accept an arbitrary
potential callable instead of the (q0, q1, poly, amp) encoding.
"""
import math

BACKEND = "python"
RESCALE = 600
_BIG = math.ldexp(1.0, RESCALE)


def _encoded(q0, q1, poly, amp):
    poly = tuple(float(c) for c in poly)

    def q(x):
        v = 0.0
        for c in reversed(poly):
            v = v * x + c
        if amp:
            v += amp * x * x * math.exp(-x)
        return q0 / (x * x) + q1 / x + v
    return q


def _prop(w2, h, y, dy):
    z = -w2 * h * h
    if abs(z) < 1e-8:
        c = 1.0 + z * (0.5 + z * (1.0 / 24.0 + z / 720.0))
        s = h * (1.0 + z * (1.0 / 6.0 + z * (1.0 / 120.0 + z / 5040.0)))
        d = -w2 * s
    elif w2 > 0.0:
        om = math.sqrt(w2)
        t = math.sin(om * h)
        c = math.cos(om * h)
        s = t / om
        d = -om * t
    else:
        om = math.sqrt(-w2)
        t = math.sinh(om * h)
        c = math.cosh(om * h)
        s = t / om
        d = om * t
    return c * y + s * dy, d * y + c * dy


def step_fn(q, lam, x, y, dy, h):
    return _prop(lam - q(x + 0.5 * h), h, y, dy)


def step(q0, q1, poly, amp, lam, x, y, dy, h):
    return step_fn(_encoded(q0, q1, poly, amp), lam, x, y, dy, h)


def propagate_fn(q, lam, x, y, dy, x_end, tol, h0, hmin_rel=1e-12, max_steps=50_000_000):
    h = h_next = h0
    nacc = nrej = nscale = 0
    status = 0
    while x < x_end:
        last = x + h >= x_end
        hs = x_end - x if last else h
        qa = q(x + 0.5 * hs)
        y1, d1 = _prop(lam - qa, hs, y, dy)
        ym, dm = _prop(lam - q(x + 0.25 * hs), 0.5 * hs, y, dy)
        y2, d2 = _prop(lam - q(x + 0.75 * hs), 0.5 * hs, ym, dm)
        w = max(abs(lam - qa), lam)
        if w <= 0.0:
            w = 1.0 / (x * x)
        sw = math.sqrt(w)
        err = max(abs(y2 - y1), abs(d2 - d1) / sw) / 3.0
        scale = max(abs(y2), abs(d2) / sw)
        if err <= tol * scale:
            y = y2 + (y2 - y1) / 3.0
            dy = d2 + (d2 - d1) / 3.0
            x = x_end if last else x + hs
            nacc += 1
            if abs(y) > _BIG or abs(dy) > _BIG:
                y = math.ldexp(y, -RESCALE)
                dy = math.ldexp(dy, -RESCALE)
                nscale += 1
            fac = 4.0 if err == 0.0 else min(4.0, 0.9 * (tol * scale / err) ** (1.0 / 3.0))
            if not last or hs >= h:
                h = hs * fac
            h_next = h
            if nacc >= max_steps:
                status = 2
                break
        elif not (math.isfinite(err) and math.isfinite(scale)):
            status = 3
            break
        else:
            nrej += 1
            h = hs * max(0.1, 0.9 * (tol * scale / err) ** (1.0 / 3.0))
            if h < hmin_rel * x:
                status = 1
                break
    return x, y, dy, nacc, nrej, h_next, status, nscale


def propagate(q0, q1, poly, amp, lam, x, y, dy, x_end, tol, h0, hmin_rel=1e-12,
              max_steps=50_000_000):
    return propagate_fn(_encoded(q0, q1, poly, amp), lam, x, y, dy, x_end, tol, h0,
                        hmin_rel, max_steps)
