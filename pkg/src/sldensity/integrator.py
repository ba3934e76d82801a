"""Shooting for -y'' + q y = lam y with exact trigonometric/hyperbolic kernels.

On each step q is frozen at the step midpoint and (y, y') is advanced by the
exact propagator of the resulting constant-coefficient equation.  Step sizes
are controlled by step doubling; the two-half-step result is Richardson
corrected before it is accepted.

The compiled kernels in ``_kernels`` are used when importable; set
``SLDENSITY_PURE_PYTHON=1`` to force the pure-Python twin.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

from . import _pykernels
from .errors import DomainError, StiffnessError
from .potentials import Potential

if os.environ.get("SLDENSITY_PURE_PYTHON"):
    _backend = _pykernels
else:
    try:
        from . import _kernels as _backend
    except ImportError:  # extension not built
        _backend = _pykernels

BACKEND = _backend.BACKEND

TOL_MIN, TOL_MAX = 1e-14, 1e-2


@dataclass(frozen=True)
class IvpState:
    x: float
    y: float
    dy: float
    lam: float

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (self.x, self.y, self.dy)):
            raise DomainError("non-finite IVP state")


def _dispatch(p: Potential, backend=None):
    be = backend or _backend
    enc = p.kernel_params()
    if enc is None:
        # non-encodable tails always take the callback route
        return None, p
    return be, enc


def step_exact_kernel(p: Potential, s: IvpState, h: float, backend=None) -> IvpState:
    """Advance one step of length h with q frozen at s.x + h/2."""
    if h <= 0 or s.x <= 0:
        raise DomainError("step needs h > 0 and x > 0")
    be, enc = _dispatch(p, backend)
    if be is None:
        y, dy = _pykernels.step_fn(p, s.lam, s.x, s.y, s.dy, h)
    else:
        y, dy = be.step(*enc, s.lam, s.x, s.y, s.dy, h)
    return IvpState(s.x + h, y, dy, s.lam)


def propagation_matrix(w2: float, h: float):
    """2x2 propagator of y'' = -w2 y over length h (columns: images of (1,0), (0,1))."""
    c, d = _pykernels._prop(w2, h, 1.0, 0.0)
    s, c2 = _pykernels._prop(w2, h, 0.0, 1.0)
    return ((c, s), (d, c2))


def initial_step(x_start: float, x_end: float, lam: float) -> float:
    return min(0.1, (x_end - x_start) / 16.0) / (1.0 + math.sqrt(max(lam, 0.0)))


class Shooter:
    """Integration state for one lam that can be extended to larger x.

    Each call to :meth:`advance` continues from the last accepted point, so a
    sequence of growing matching points costs one pass over the interval.
    ``(y, dy)`` are stored scaled by ``2**-log2_scale`` so that solutions
    growing through long classically forbidden regions do not overflow.
    """

    def __init__(self, p: Potential, lam: float, state: IvpState, tol: float, backend=None,
                 hmin_rel: float = 1e-12, max_steps: int = 50_000_000):
        if not (TOL_MIN <= tol <= TOL_MAX):
            raise DomainError(f"tol={tol} outside [{TOL_MIN}, {TOL_MAX}]")
        self.p = p
        self.lam = lam
        self.tol = tol
        self.x, self.y, self.dy = state.x, state.y, state.dy
        self.h = None
        self.hmin_rel = hmin_rel
        self.max_steps = max_steps
        self.log2_scale = 0
        self.nsteps = 0
        self.nrejects = 0
        self._be, self._enc = _dispatch(p, backend)
        self._rescale_bits = (self._be or _pykernels).RESCALE

    @property
    def state(self) -> IvpState:
        """Unscaled state; raises DomainError if it is not representable."""
        if self.log2_scale:
            try:
                return IvpState(self.x, math.ldexp(self.y, self.log2_scale),
                                math.ldexp(self.dy, self.log2_scale), self.lam)
            except OverflowError:
                raise DomainError(
                    f"solution exceeds the float range at x={self.x:.6g}; use .scaled") from None
        return IvpState(self.x, self.y, self.dy, self.lam)

    @property
    def scaled(self):
        """(x, y, dy, log2_scale) with the true solution equal to (y, dy) * 2**log2_scale."""
        return self.x, self.y, self.dy, self.log2_scale

    def advance(self, x_end: float) -> IvpState:
        self.advance_scaled(x_end)
        return self.state

    def advance_scaled(self, x_end: float):
        """Extend the shot to ``x_end`` and return :attr:`scaled`."""
        if x_end < self.x:
            raise DomainError(f"cannot integrate backwards from {self.x} to {x_end}")
        if x_end == self.x:
            return self.scaled
        h0 = self.h or initial_step(self.x, x_end, self.lam)
        if self._be is None:
            out = _pykernels.propagate_fn(self.p, self.lam, self.x, self.y, self.dy,
                                          x_end, self.tol, h0, self.hmin_rel,
                                          self.max_steps)
        else:
            out = self._be.propagate(*self._enc, self.lam, self.x, self.y, self.dy,
                                     x_end, self.tol, h0, self.hmin_rel, self.max_steps)
        x, y, dy, nacc, nrej, h_next, status, nscale = out
        self.nsteps += nacc
        self.nrejects += nrej
        if status != 0:
            what = {1: "step size underflow", 2: "step budget exhausted"}.get(
                status, "non-finite solution")
            raise StiffnessError(
                f"{what} at x={x:.6g} (lam={self.lam}, tol={self.tol}, "
                f"{self.nsteps} steps, {self.nrejects} rejections)",
                x=x, h=h_next, nsteps=self.nsteps)
        self.x, self.y, self.dy, self.h = x, y, dy, h_next
        self.log2_scale += nscale * self._rescale_bits
        return self.scaled


def integrate(p: Potential, lam: float, start: IvpState, x_end: float, tol: float,
              backend=None) -> IvpState:
    """Adaptive integration of (y, y') from ``start.x`` to ``x_end``."""
    if x_end <= start.x:
        raise DomainError("x_end must exceed the start point")
    return Shooter(p, lam, start, tol, backend).advance(x_end)
