"""Compare the compiled and pure-Python shooting kernels.

    python benchmarks/bench_kernels.py [--repeat 3]

Each case shoots phi for the hydrogen potential (ell=1, a=1) from the
Frobenius start point to a matching point at IVP tolerance 1e-12 and reports
wall time per shot, steps per second and the speed-up.  Both backends must
produce the same end state to ~1e-10 relative; the script exits non-zero if
they do not.
"""
import argparse
import sys
import time

from sldensity import _pykernels
from sldensity.frobenius import start_values
from sldensity.integrator import IvpState, Shooter
from sldensity.potentials import hydrogen, make_barrier

try:
    from sldensity import _kernels
except ImportError:
    _kernels = None

CASES = (
    ("hydrogen lam=1 x=100", hydrogen(1, 1.0), 1.0, 100.0),
    ("hydrogen lam=100 x=10", hydrogen(1, 1.0), 100.0, 10.0),
    ("hydrogen lam=1e4 x=1", hydrogen(1, 1.0), 1e4, 1.0),
    ("barrier ell=2 lam=40 x=20", make_barrier(2, 1.0), 40.0, 20.0),
)


def shoot(p, lam, x_end, backend, tol):
    x0, y, dy, _ = start_values(p, lam)
    sh = Shooter(p, lam, IvpState(x0, y, dy, lam), tol, backend=backend)
    s = sh.advance(x_end)
    return s, sh.nsteps


def best_time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--tol", type=float, default=1e-12)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the Python backend is available")
    print(f"{'case':28s} {'steps':>8s} {'python s':>10s} {'cython s':>10s} {'speed-up':>9s}")
    ok = True
    for name, p, lam, x in CASES:
        tp, (sp, n) = best_time(lambda: shoot(p, lam, x, _pykernels, args.tol), args.repeat)
        if _kernels is None:
            print(f"{name:28s} {n:8d} {tp:10.4f} {'-':>10s} {'-':>9s}")
            continue
        tc, (sc, _) = best_time(lambda: shoot(p, lam, x, _kernels, args.tol), args.repeat)
        rel = abs(sp.y - sc.y) / max(abs(sc.y), 1e-300)
        ok &= rel < 1e-10
        print(f"{name:28s} {n:8d} {tp:10.4f} {tc:10.4f} {tp / tc:8.1f}x"
              + ("" if rel < 1e-10 else f"  MISMATCH {rel:.1e}"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
