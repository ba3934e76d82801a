"""Principal Frobenius solution phi(x, lam) = sum_n a_n x**(n + nu), a_0 = 1."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Tuple

from .errors import DomainError, ResonanceError, SeriesNotConvergedError
from .potentials import Potential, series_coeff

N_MAX_DEFAULT = 200
TRUNC_EPS = 1e-16
# max |term| / |sum| tolerated before the series start point is pulled in
CANCELLATION_LIMIT = 1e3


def indicial_root(q0: float) -> float:
    """Larger root of r**2 - r - q0 = 0."""
    if q0 < -0.25:
        raise DomainError(f"q0={q0} < -1/4 gives complex indicial roots")
    return 0.5 + 0.5 * math.sqrt(1.0 + 4.0 * q0)


@dataclass(frozen=True)
class FrobeniusExpansion:
    nu: float
    lam: float
    coeffs: Tuple[float, ...]
    n_used: int = 0

    @property
    def a0(self) -> float:
        return self.coeffs[0]

    def scaled(self, c: float) -> "FrobeniusExpansion":
        """Same expansion with every coefficient multiplied by ``c``."""
        return FrobeniusExpansion(self.nu, self.lam, tuple(c * a for a in self.coeffs), self.n_used)


class PhiEval(NamedTuple):
    phi: float
    dphi: float
    n_used: int
    cancellation: float  # max |term| / |partial sum|


def build_coeffs(p: Potential, lam: float, n_max: int = N_MAX_DEFAULT) -> FrobeniusExpansion:
    if n_max < 2:
        raise ValueError("n_max must be at least 2")
    q0, q1 = p.q0, p.q1
    nu = indicial_root(q0)
    tail = [(k, c) for k, c in ((k, series_coeff(p, k)) for k in range(n_max - 1)) if c]
    a = [1.0]
    den = nu * (nu + 1.0) - q0
    if den == 0.0:
        raise ResonanceError("indicial resonance at n=1")
    a.append(q1 * a[0] / den)
    for n in range(2, n_max + 1):
        den = (nu + n - 1.0) * (nu + n) - q0
        if den == 0.0:
            raise ResonanceError(f"indicial resonance at n={n}")
        s = -lam * a[n - 2] + q1 * a[n - 1]
        for k, c in tail:
            if k > n - 2:
                break
            s += c * a[n - 2 - k]
        a.append(s / den)
    return FrobeniusExpansion(nu=nu, lam=float(lam), coeffs=tuple(a), n_used=len(a))


def recurrence_residuals(p: Potential, fe: FrobeniusExpansion):
    """Relative residual of the recurrence for each n >= 1."""
    a, nu, q0, q1 = fe.coeffs, fe.nu, p.q0, p.q1
    out = []
    for n in range(1, len(a)):
        lhs = ((nu + n - 1.0) * (nu + n) - q0) * a[n]
        rhs = q1 * a[n - 1]
        if n >= 2:
            rhs += -fe.lam * a[n - 2] + sum(series_coeff(p, k) * a[n - 2 - k] for k in range(n - 1))
        out.append(abs(lhs - rhs) / max(1.0, abs(a[n])))
    return out


def series_cutoff(p: Potential, lam: float) -> float:
    """x0(lam) = |q0|/sqrt(lam), with max(|q0|, |q1|, 1/2)/sqrt(lam) when q0 = 0."""
    if lam <= 0:
        raise DomainError("series cutoff needs lam > 0")
    if p.q0 != 0.0:
        return abs(p.q0) / math.sqrt(lam)
    return max(abs(p.q0), abs(p.q1), 0.5) / math.sqrt(lam)


def eval_phi_info(fe: FrobeniusExpansion, x: float) -> PhiEval:
    if x <= 0:
        raise DomainError("phi is evaluated for x > 0 only")
    a, nu = fe.coeffs, fe.nu
    s = ds = 0.0
    big = 0.0
    small_run = 0
    xn = 1.0
    for n, an in enumerate(a):
        t = an * xn
        dt = (n + nu) * t
        s += t
        ds += dt
        big = max(big, abs(t), abs(dt) / (n + nu))
        if abs(t) < TRUNC_EPS * abs(s) and abs(dt) < TRUNC_EPS * abs(ds):
            small_run += 1
            if small_run == 3:
                xnu = x ** nu
                denom = max(abs(s), abs(ds) / (n + nu), 1e-300)
                return PhiEval(xnu * s, xnu / x * ds, n + 1, big / denom)
        else:
            small_run = 0
        xn *= x
    raise SeriesNotConvergedError(
        f"Frobenius series not converged at x={x} with {len(a)} terms; shrink x")


def eval_phi(fe: FrobeniusExpansion, x: float) -> Tuple[float, float]:
    """phi(x, lam) and phi'(x, lam) from the truncated series."""
    r = eval_phi_info(fe, x)
    return r.phi, r.dphi


def start_values(p: Potential, lam: float, n_max: int = N_MAX_DEFAULT, fe=None):
    """Point in (0, x0(lam)] where the series is summed, plus phi and phi' there.

    Starts at the cutoff and halves x while the partial sums suffer more than
    ``CANCELLATION_LIMIT`` cancellation or fail to converge.
    """
    if fe is None:
        fe = build_coeffs(p, lam, n_max)
    x = series_cutoff(p, lam)
    for _ in range(60):
        try:
            r = eval_phi_info(fe, x)
        except SeriesNotConvergedError:
            x *= 0.5
            continue
        if r.cancellation <= CANCELLATION_LIMIT:
            return x, r.phi, r.dphi, fe
        x *= 0.5
    raise SeriesNotConvergedError(f"no usable series start point for lam={lam}")
