import math

import pytest
from hypothesis import given, strategies as st

from sldensity.errors import DomainError
from sldensity.frobenius import build_coeffs, eval_phi, series_cutoff
from sldensity.potentials import bessel
from sldensity.reference import (EXAMPLES, bessel_density, bessel_frac_example,
                                 bessel_int_example, bessel_j, bessel_rho, coulomb_density,
                                 coulomb_example, exact_density, exact_phi_bessel, gamma_fn,
                                 hydrogen_example, k_ell, rho_closed_form_oracle)


def test_gamma_known_values():
    assert gamma_fn(1.0) == 1.0 and gamma_fn(5.0) == 24.0
    assert gamma_fn(0.5) == pytest.approx(1.7724538509055160, rel=1e-14)
    assert gamma_fn(4.0 / 3.0) == pytest.approx(0.8929795115692492, rel=1e-13)
    with pytest.raises(DomainError):
        gamma_fn(0.0)


@given(st.floats(0.01, 29.0))
def test_gamma_recursion_and_mpmath(x):
    import mpmath as mp
    assert gamma_fn(x + 1.0) == pytest.approx(x * gamma_fn(x), rel=1e-13)
    assert gamma_fn(x) == pytest.approx(float(mp.gamma(x)), rel=1e-13)


@given(nu=st.floats(0.0, 4.0), z=st.floats(0.0, 60.0))
def test_bessel_j_against_mpmath(nu, z):
    import mpmath as mp
    mp.mp.dps = 30
    assert bessel_j(nu, z) == pytest.approx(float(mp.besselj(nu, z)), abs=1e-14)


def test_k_ell():
    assert k_ell(0, 3.0, 2.0) == 1.0
    assert k_ell(1, 1.0, 1.0) == pytest.approx(5.0 / 36.0, rel=1e-15)
    assert k_ell(2, 1.0, 0.0) == pytest.approx(1.0 / 14400.0, rel=1e-15)


def test_exact_densities():
    assert exact_density(bessel_int_example(1), 4.0) == pytest.approx(0.5, rel=1e-15)
    g = gamma_fn(4.0 / 3.0)
    assert exact_density(bessel_frac_example(), 1.0) == pytest.approx(
        1.0 / (2.0 ** (5.0 / 3.0) * g * g), rel=1e-13)
    assert exact_density(hydrogen_example(), 1e-14) == pytest.approx(1.0 / 36.0, rel=1e-12)
    assert exact_density(coulomb_example(), 1.0) == pytest.approx(
        (5.0 / 36.0) / math.expm1(math.pi), rel=1e-14)
    assert exact_density(coulomb_example(), 1.0) == pytest.approx(0.0062730, abs=1e-7)
    with pytest.raises(DomainError):
        exact_density(hydrogen_example(), 0.0)


def test_example_factories_validate():
    with pytest.raises(DomainError):
        hydrogen_example(1, -1.0)
    with pytest.raises(DomainError):
        coulomb_example(1, 1.0)
    with pytest.raises(DomainError):
        bessel_frac_example(0.5)
    assert set(EXAMPLES) == {"hydrogen", "coulomb", "bessel_frac", "bessel_int"}


@given(ell=st.integers(0, 4), a=st.floats(0.05, 5.0), lam=st.floats(1e-3, 1e3))
def test_hydrogen_dominates_repulsive(ell, a, lam):
    h, c = coulomb_density(ell, a, lam), coulomb_density(ell, -a, lam)
    assert h > c > 0 or (h > 0 and c == 0.0)


def test_phi_bessel_values():
    assert exact_phi_bessel(1.0, 1.0, 0.1) == pytest.approx(0.03158326460, rel=1e-10)
    v = 2 ** (1 / 3) * gamma_fn(4 / 3) * 4 ** (-1 / 6) * bessel_j(1 / 3, 2.0)
    assert exact_phi_bessel(1.0 / 3.0, 4.0, 1.0) == pytest.approx(v, rel=1e-15)
    # leading behaviour x**(nu + 1/2)
    assert exact_phi_bessel(2.0, 3.0, 1e-4) == pytest.approx(1e-4 ** 2.5, rel=1e-8)


@pytest.mark.parametrize("nu", [1.0 / 3.0, 1.0, 2.0, 2.7])
@pytest.mark.parametrize("lam", [0.3, 4.0, 100.0])
def test_oracle_agrees_with_series(nu, lam):
    p = bessel(nu)
    fe = build_coeffs(p, lam)
    x0 = series_cutoff(p, lam)
    for x in (0.1 * x0, 0.5 * x0, x0):
        phi, _ = eval_phi(fe, x)
        assert phi == pytest.approx(exact_phi_bessel(nu, lam, x), rel=1e-12)


def test_rho_oracle():
    assert rho_closed_form_oracle(bessel_int_example(1), 4.0) == 1.0
    assert bessel_rho(1.0 / 3.0, 1.0) == pytest.approx(0.2962522208845, rel=1e-12)
    ex = hydrogen_example(1, 1.0)
    import mpmath as mp
    mp.mp.dps = 30
    want = mp.quad(lambda t: coulomb_density(1, 1.0, float(t)), [0, 0.1, 1])
    assert rho_closed_form_oracle(ex, 1.0) == pytest.approx(float(want), rel=1e-12)
    assert bessel_density(1.0, 2.0) == 0.25
