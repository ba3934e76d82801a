"""Admissible potentials q(x) = q0/x**2 + q1/x + tail(x) on (0, inf).

The tail is analytic at the origin; its Maclaurin coefficients feed the
Frobenius recurrence while closed-form values and derivatives (up to third
order) feed the integrator and the Appell approximants.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

from .errors import InvalidPotentialError, UnsupportedOperationError

Derivs = Tuple[float, float, float, float]


class Tail:
    """Analytic part of the potential, sum_{k>=0} q_{k+2} x**k."""

    name = "tail"

    def derivs(self, x: float) -> Derivs:
        raise NotImplementedError

    def coeff(self, k: int) -> float:
        raise UnsupportedOperationError(f"{self.name} tail has no Maclaurin coefficient rule")


@dataclass(frozen=True)
class ZeroTail(Tail):
    name = "zero"

    def derivs(self, x):
        return 0.0, 0.0, 0.0, 0.0

    def coeff(self, k):
        return 0.0


@dataclass(frozen=True)
class PowerSeriesTail(Tail):
    """Polynomial tail; ``coeffs[k]`` is q_{k+2}, zero past the end."""

    coeffs: Tuple[float, ...] = ()
    name = "power-series"

    def derivs(self, x):
        v = d1 = d2 = d3 = 0.0
        # Horner for the value and its first three derivatives
        for c in reversed(self.coeffs):
            d3 = d3 * x + 3.0 * d2
            d2 = d2 * x + 2.0 * d1
            d1 = d1 * x + v
            v = v * x + c
        return v, d1, d2, d3

    def coeff(self, k):
        return float(self.coeffs[k]) if k < len(self.coeffs) else 0.0


@dataclass(frozen=True)
class ExpBarrierTail(Tail):
    """amplitude * x**2 * exp(-x)."""

    amplitude: float = 15.0
    name = "exp-barrier"

    def derivs(self, x):
        e = self.amplitude * math.exp(-x)
        x2 = x * x
        return (e * x2,
                e * (2.0 * x - x2),
                e * (2.0 - 4.0 * x + x2),
                e * (-6.0 + 6.0 * x - x2))

    def coeff(self, k):
        if k < 2:
            return 0.0
        if k > 172:  # 1/(k-2)! is below the smallest double
            return 0.0
        return (-1.0) ** k * self.amplitude / math.factorial(k - 2)


@dataclass(frozen=True)
class ClosedFormTail(Tail):
    """Arbitrary analytic tail given by callables.

    ``derivs_fn(x)`` returns the value and first three derivatives;
    ``coeff_fn(k)`` (optional) returns the Maclaurin coefficient of x**k.
    """

    derivs_fn: Callable[[float], Derivs] = field(compare=False)
    coeff_fn: Optional[Callable[[int], float]] = field(default=None, compare=False)
    tail_name: str = "closed-form"

    @property
    def name(self):
        return self.tail_name

    def derivs(self, x):
        return tuple(float(v) for v in self.derivs_fn(x))

    def coeff(self, k):
        if self.coeff_fn is None:
            return super().coeff(k)
        return float(self.coeff_fn(k))


@dataclass(frozen=True)
class Potential:
    q0: float
    q1: float
    tail: Tail = field(default_factory=ZeroTail)
    label: str = field(default="", compare=False)

    def __post_init__(self):
        if not (math.isfinite(self.q0) and math.isfinite(self.q1)):
            raise InvalidPotentialError("q0 and q1 must be finite")
        if self.q0 < -0.25:
            raise InvalidPotentialError(
                f"q0={self.q0} < -1/4: solutions oscillate at x=0")

    def __call__(self, x: float) -> float:
        return self.q0 / (x * x) + self.q1 / x + self.tail.derivs(x)[0]

    def derivs(self, x: float) -> Derivs:
        """Return (q, q', q'', q''') at ``x > 0``."""
        t, t1, t2, t3 = self.tail.derivs(x)
        a, b = self.q0, self.q1
        ix = 1.0 / x
        ix2 = ix * ix
        return (a * ix2 + b * ix + t,
                -2.0 * a * ix2 * ix - b * ix2 + t1,
                6.0 * a * ix2 * ix2 + 2.0 * b * ix2 * ix + t2,
                -24.0 * a * ix2 * ix2 * ix - 6.0 * b * ix2 * ix2 + t3)

    @property
    def is_rational(self) -> bool:
        """True when q = A/x + B/x**2 exactly (zero tail)."""
        return isinstance(self.tail, ZeroTail) or (
            isinstance(self.tail, PowerSeriesTail) and not any(self.tail.coeffs))

    @property
    def is_regular(self) -> bool:
        return self.q0 == 0.0 and self.q1 == 0.0

    def kernel_params(self):
        """Encode as (q0, q1, poly, amp) for the compiled integrator, or None."""
        tail = self.tail
        if isinstance(tail, ZeroTail):
            return self.q0, self.q1, (), 0.0
        if isinstance(tail, PowerSeriesTail):
            return self.q0, self.q1, tuple(float(c) for c in tail.coeffs), 0.0
        if isinstance(tail, ExpBarrierTail):
            return self.q0, self.q1, (), float(tail.amplitude)
        return None

    def describe(self) -> str:
        return self.label or f"q0={self.q0:g}, q1={self.q1:g}, tail={self.tail.name}"


def make_rational(A: float, B: float) -> Potential:
    """q(x) = A/x + B/x**2."""
    return Potential(q0=float(B), q1=float(A), label=f"rational:A={A:g},B={B:g}")


def make_barrier(ell: int, a: float, amplitude: float = 15.0) -> Potential:
    """q(x) = ell(ell+1)/x**2 - a/x + 15 x**2 exp(-x)."""
    if ell < 0 or int(ell) != ell:
        raise InvalidPotentialError("ell must be a nonnegative integer")
    ell = int(ell)
    return Potential(q0=float(ell * (ell + 1)), q1=-float(a),
                     tail=ExpBarrierTail(float(amplitude)),
                     label=f"barrier:ell={ell},a={a:g}")


def series_coeff(p: Potential, k: int) -> float:
    """Maclaurin coefficient q_{k+2} of the analytic tail."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return p.tail.coeff(k)


def hydrogen(ell: int, a: float) -> Potential:
    """Coulomb potential -a/x + ell(ell+1)/x**2 (attractive for a > 0)."""
    return Potential(q0=float(ell * (ell + 1)), q1=-float(a),
                     label=f"coulomb:ell={ell},a={a:g}")


def bessel(nu: float) -> Potential:
    """(nu**2 - 1/4)/x**2."""
    return Potential(q0=nu * nu - 0.25, q1=0.0, label=f"bessel:nu={nu:g}")
