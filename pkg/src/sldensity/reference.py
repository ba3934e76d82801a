"""Closed-form test problems and the special functions they need.

Four problems on (0, inf) with known spectral densities:

* ``hydrogen(ell, a)``, a > 0:  q = -a/x + ell(ell+1)/x**2
* ``coulomb(ell, a)``,  a < 0:  same potential, repulsive
* ``bessel_frac(nu)``:          q = (nu**2 - 1/4)/x**2, nu not a half-integer
* ``bessel_int(N)``:            q = (N**2 - 1/4)/x**2

Gamma and J_nu are implemented here from scratch so the oracles do not share
code with any library routine under test.
"""
from __future__ import annotations

import decimal
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError
from .potentials import Potential, bessel, hydrogen

# Lanczos approximation, g = 7, n = 9
_HANKEL_FROM = 25.0
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma_fn(x: float) -> float:
    """Gamma function for x > 0."""
    if x <= 0:
        raise DomainError("gamma_fn is defined here for x > 0 only")
    if x < 0.5:
        return math.pi / (math.sin(math.pi * x) * gamma_fn(1.0 - x))
    if x == int(x) and x <= 171:
        return float(math.factorial(int(x) - 1))
    z = x - 1.0
    s = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        s += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    # split the power to keep t**(z+1/2) finite up to x ~ 170
    half = t ** (0.5 * (z + 0.5))
    return math.sqrt(2.0 * math.pi) * half * math.exp(-t) * half * s


def bessel_j(nu: float, z: float) -> float:
    """J_nu(z) for real nu >= 0 and z >= 0.

    Ascending series below z = 25 (summed in 50-digit decimal arithmetic, since
    its terms cancel heavily), Hankel's asymptotic expansion above.
    """
    if nu < 0 or z < 0:
        raise DomainError("bessel_j needs nu >= 0 and z >= 0")
    if z == 0.0:
        return 1.0 if nu == 0 else 0.0
    if z < _HANKEL_FROM:
        with decimal.localcontext() as ctx:
            ctx.prec = 50
            w = -decimal.Decimal(z) ** 2 / 4
            dnu = decimal.Decimal(nu)
            t = s = decimal.Decimal(1)
            k = 0
            while True:
                k += 1
                t = t * w / (k * (k + dnu))
                s += t
                if k > 0.5 * z and abs(t) < decimal.Decimal("1e-40") * abs(s):
                    break
            # z**nu * 2**-nu rather than (z/2)**nu: z/2 underflows for subnormal z
            return z ** nu * 2.0 ** -nu / gamma_fn(nu + 1.0) * float(s)
    mu = 4.0 * nu * nu
    P = []
    Q = []
    term = 1.0
    k = 0
    prev = math.inf
    while k < 200:
        # term = a_k(nu) / z**k
        if abs(term) > prev:
            break
        if k % 2 == 0:
            P.append(term * (-1) ** (k // 2))
        else:
            Q.append(term * (-1) ** (k // 2))
        prev = abs(term)
        if prev < 1e-17:
            break
        k += 1
        term *= (mu - (2 * k - 1) ** 2) / (k * 8.0 * z)
        if term == 0.0:
            break
    chi = z - (0.5 * nu + 0.25) * math.pi
    return math.sqrt(2.0 / (math.pi * z)) * (math.fsum(P) * math.cos(chi) - math.fsum(Q) * math.sin(chi))


def exact_phi_bessel(nu: float, lam: float, x: float) -> float:
    """2**nu Gamma(nu+1) lam**(-nu/2) x**(1/2) J_nu(sqrt(lam) x)."""
    if lam <= 0 or x <= 0:
        raise DomainError("need lam > 0 and x > 0")
    return 2.0 ** nu * gamma_fn(nu + 1.0) * lam ** (-0.5 * nu) * math.sqrt(x) * bessel_j(nu, math.sqrt(lam) * x)


def k_ell(ell: int, a: float, lam: float) -> float:
    """prod_{j=1}^{ell} (4 lam j**2 + a**2) / ((2 ell + 1)!)**2."""
    prod = 1.0
    for j in range(1, ell + 1):
        prod *= 4.0 * lam * j * j + a * a
    return prod / float(math.factorial(2 * ell + 1)) ** 2


def coulomb_density(ell: int, a: float, lam: float) -> float:
    """k_ell(lam) a / (1 - exp(-pi a / sqrt(lam))), valid for either sign of a."""
    u = math.pi * a / math.sqrt(lam)
    if a == 0:
        return k_ell(ell, a, lam) * math.sqrt(lam) / math.pi
    if u > 0:
        return k_ell(ell, a, lam) * a / -math.expm1(-u)
    # |a| / (exp(|u|) - 1) written without overflow
    e = math.exp(u)
    return k_ell(ell, a, lam) * abs(a) * e / -math.expm1(u)


def bessel_density(nu: float, lam: float) -> float:
    """lam**nu / (2**(2 nu + 1) Gamma(nu + 1)**2)."""
    return lam ** nu / (2.0 ** (2.0 * nu + 1.0) * gamma_fn(nu + 1.0) ** 2)


def bessel_rho(nu: float, lam: float) -> float:
    """Antiderivative of ``bessel_density`` vanishing at 0."""
    return lam ** (nu + 1.0) / (2.0 ** (2.0 * nu + 1.0) * (nu + 1.0) * gamma_fn(nu + 1.0) ** 2)


@dataclass(frozen=True)
class ExactExample:
    tag: str
    potential: Potential
    density: Callable[[float], float]
    kind: str
    param: tuple

    def __call__(self, lam: float) -> float:
        return self.density(lam)


def hydrogen_example(ell: int = 1, a: float = 1.0) -> ExactExample:
    if a <= 0:
        raise DomainError("hydrogen example needs a > 0")
    return ExactExample(f"hydrogen({ell},{a:g})", hydrogen(ell, a),
                        lambda lam: coulomb_density(ell, a, lam), "coulomb", (ell, a))


def coulomb_example(ell: int = 1, a: float = -1.0) -> ExactExample:
    if a >= 0:
        raise DomainError("repulsive Coulomb example needs a < 0")
    return ExactExample(f"coulomb({ell},{a:g})", hydrogen(ell, a),
                        lambda lam: coulomb_density(ell, a, lam), "coulomb", (ell, a))


def bessel_frac_example(nu: float = 1.0 / 3.0) -> ExactExample:
    if (2.0 * nu) == int(2.0 * nu):
        raise DomainError("bessel_frac needs nu not a multiple of 1/2")
    return ExactExample(f"bessel_frac({nu:.6g})", bessel(nu),
                        lambda lam: bessel_density(nu, lam), "bessel", (nu,))


def bessel_int_example(N: int = 1) -> ExactExample:
    return ExactExample(f"bessel_int({N})", bessel(float(N)),
                        lambda lam: bessel_density(float(N), lam), "bessel", (float(N),))


def exact_density(ex: ExactExample, lam: float) -> float:
    if lam <= 0:
        raise DomainError("exact densities are given for lam > 0")
    return ex.density(lam)


_GL_CACHE = {}


def _gauss_legendre(n):
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def _panel_quad(f, a, b, n):
    t, w = _gauss_legendre(n)
    m, r = 0.5 * (a + b), 0.5 * (b - a)
    return r * math.fsum(wi * f(m + r * ti) for ti, wi in zip(t, w))


def _composite(f, lam, n):
    # geometric panels towards 0 plus a uniform split of [lam/2, lam]
    edges = [0.0] + [lam * 2.0 ** -k for k in range(60, 0, -1)]
    edges += [lam * (0.5 + 0.5 * i / 8) for i in range(1, 9)]
    return math.fsum(_panel_quad(f, edges[i], edges[i + 1], n) for i in range(len(edges) - 1))


def rho_closed_form_oracle(ex: ExactExample, lam: float) -> float:
    """rho(lam) - rho(0) for an exact example.

    Bessel problems use the closed-form antiderivative; Coulomb problems use
    composite Gauss-Legendre quadrature of the closed-form density, accepted
    when 24- and 32-point rules agree to 1e-12 relative.
    """
    if lam <= 0:
        raise DomainError("need lam > 0")
    if ex.kind == "bessel":
        return bessel_rho(ex.param[0], lam)
    f = ex.density
    lo = _composite(f, lam, 24)
    hi = _composite(f, lam, 32)
    if abs(hi - lo) > 1e-12 * max(1.0, abs(hi)):
        raise ArithmeticError(f"oracle quadrature did not settle at lam={lam}: {lo} vs {hi}")
    return hi


EXAMPLES = {
    "hydrogen": hydrogen_example,
    "coulomb": coulomb_example,
    "bessel_frac": bessel_frac_example,
    "bessel_int": bessel_int_example,
}
