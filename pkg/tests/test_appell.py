import math

import pytest
from hypothesis import given, settings, strategies as st

from sldensity.appell import (AppellState, approximant, asymptotic_coeffs, default_order,
                              f1, f2, f3, f3_literal, fN, parse_method, residuals)
from sldensity.density import f3_gate
from sldensity.errors import DomainError, MatchingPointError, TurningPointError
from sldensity.potentials import bessel, hydrogen, make_barrier, make_rational

FREE = make_rational(0.0, 0.0)


@pytest.mark.parametrize("lam, expected", [(4.0, (2.0, 0.0, 0.5)), (1.0, (1.0, 0.0, 1.0)),
                                           (100.0, (10.0, 0.0, 0.1))])
def test_f1_values(lam, expected):
    s = f1(lam)
    assert (s.P, s.Q, s.R) == pytest.approx(expected, rel=1e-15)
    assert s.defect == 0.0 if lam != 100.0 else abs(s.defect) < 1e-15


def test_f1_rejects_nonpositive_lambda():
    with pytest.raises(DomainError):
        f1(0.0)


def test_f2_hydrogen_point():
    s = f2(hydrogen(1, 1.0), 1.0, 10.0)
    assert (s.P, s.R) == pytest.approx((1.03923048454, 0.96225045), abs=1e-8)
    assert s.P == pytest.approx(math.sqrt(1.08), rel=1e-15)
    assert s.Q == pytest.approx(-0.006 / (2.0 * 1.08 ** 1.5), rel=1e-12)


def test_free_particle_reductions():
    for fn in (f2, f3, f3_literal):
        s = fn(FREE, 3.0, 7.0)
        assert (s.P, s.Q, s.R) == pytest.approx((math.sqrt(3.0), 0.0, 1.0 / math.sqrt(3.0)),
                                                rel=1e-15, abs=1e-300)
    c = asymptotic_coeffs(0.0, 0.0, 2.0, 5)
    assert set(c.a + c.b + c.c) == {0.0}
    s = fN(c, 3.0)
    assert (s.P, s.R, s.Q) == (math.sqrt(2.0), 1.0 / math.sqrt(2.0), 0.0)


def test_f2_tends_to_initial_condition():
    s = f2(bessel(1.0), 1.0, 1e8)
    assert (s.P, s.Q, s.R) == pytest.approx((1.0, 0.0, 1.0), abs=1e-15)


def test_turning_point_raises():
    for fn in (f2, f3):
        with pytest.raises(TurningPointError):
            fn(make_rational(0.0, 2.0), 1.0, 1.0)


def test_coefficients_bessel_example():
    c = asymptotic_coeffs(0.0, 0.75, 1.0, 2)
    assert (c.a[0], c.b[0], c.c[0]) == (0.0, 0.0, 0.0)
    assert (c.a[1], c.c[1], c.b[1]) == pytest.approx((-0.375, 0.375, 0.75), rel=1e-15)
    s = fN(c, 10.0)
    assert (s.P, s.Q, s.R) == pytest.approx((0.99625, 0.00075, 1.00375), rel=1e-14)
    rP, rQ, rR = residuals(c, 10.0)
    assert rQ == pytest.approx(-1.6875e-4, rel=1e-12)
    assert rR == 0.0


@given(A=st.floats(-5, 5), lam=st.floats(0.01, 100))
def test_first_coefficients_match_binomial_series(A, lam):
    # sqrt(lam - A/x) = sqrt(lam) - A/(2 sqrt(lam) x) + ...
    c = asymptotic_coeffs(A, 0.0, lam, 1)
    assert c.a[0] == pytest.approx(-A / (2.0 * math.sqrt(lam)), rel=1e-13, abs=1e-300)
    assert c.c[0] == pytest.approx(A / (2.0 * lam ** 1.5), rel=1e-13, abs=1e-300)
    assert c.b[0] == c.c[0]


def test_hydrogen_tail_first_order():
    s = fN(asymptotic_coeffs(-1.0, 0.0, 1.0, 1), 100.0)
    assert (s.P, s.Q, s.R) == pytest.approx((1.005, -5.0e-5, 0.995), rel=1e-14)


@settings(max_examples=60)
@given(A=st.floats(-3, 3), B=st.floats(-0.25, 6), lam=st.floats(0.05, 50),
       N=st.integers(1, 12))
def test_coefficient_conditions(A, B, lam, N):
    c = asymptotic_coeffs(A, B, lam, N)
    b = lambda j: c.get("b", j)  # noqa: E731
    for j in range(1, N + 1):
        assert c.get("b", j) == j * c.get("c", j)
        lhs = j * c.get("a", j) + lam * b(j)
        rhs = A * b(j - 1) + B * b(j - 2)
        assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12 * (1 + abs(lhs)))


def _series_and_derivative(c, x):
    """(P, Q, R) and their x-derivatives by the power rule."""
    s = math.sqrt(c.lam)
    P, Q, R = s, 0.0, 1.0 / s
    dP = dQ = dR = 0.0
    for j in range(1, c.N + 1):
        a, b, cc = c.a[j - 1], c.b[j - 1], c.c[j - 1]
        P += a / x ** j
        R += cc / x ** j
        Q += b / x ** (j + 1)
        dP -= j * a / x ** (j + 1)
        dR -= j * cc / x ** (j + 1)
        dQ -= (j + 1) * b / x ** (j + 2)
    return P, Q, R, dP, dQ, dR


def _mp_coeffs(A, B, lam, N):
    """Coefficient recurrence redone in 50-digit arithmetic."""
    import mpmath as mp
    A, B, lam = mp.mpf(A), mp.mpf(B), mp.mpf(lam)
    rs = 1 / mp.sqrt(lam)
    a, b, c = [mp.mpf(0)] * (N + 1), [mp.mpf(0)] * (N + 1), [mp.mpf(0)] * (N + 1)
    at = lambda v, j: v[j] if j >= 1 else 0  # noqa: E731
    for j in range(1, N + 1):
        t1 = (A * at(b, j - 1) + B * at(b, j - 2)) / j
        t2 = mp.mpf(j - 1) / 2 * at(b, j - 2) - A * at(c, j - 1) - B * at(c, j - 2)
        t2 -= A * rs if j == 1 else (B * rs if j == 2 else 0)
        a[j], c[j] = (t1 + t2) / 2, (t1 - t2) / (2 * lam)
        b[j] = j * c[j]
    return a, b, c


@pytest.mark.parametrize("A, B, lam, N, x", [(1.0, 2.0, 1.0, 4, 30.0), (-1.0, 0.0, 3.0, 6, 12.0),
                                             (0.0, 0.75, 0.5, 3, 50.0),
                                             (2.5, -0.2, 10.0, 8, 7.0)])
def test_residuals_match_substitution(A, B, lam, N, x):
    import mpmath as mp
    mp.mp.dps = 50
    a, b, c = _mp_coeffs(A, B, lam, N)
    fc = asymptotic_coeffs(A, B, lam, N)
    for j in range(1, N + 1):
        for got, want in ((fc.a, a), (fc.b, b), (fc.c, c)):
            assert abs(got[j - 1] - float(want[j])) <= 1e-14 * abs(float(want[j])) + 1e-300
    # substitute the series into P' = gQ, Q' = -2P + 2gR, R' = -Q; derivatives by
    # the power rule, in extended precision so only the truncation residual is left
    xm, lm = mp.mpf(x), mp.mpf(lam)
    P, Q, R = mp.sqrt(lm), mp.mpf(0), 1 / mp.sqrt(lm)
    dP = dQ = dR = mp.mpf(0)
    for j in range(1, N + 1):
        P += a[j] / xm ** j
        R += c[j] / xm ** j
        Q += b[j] / xm ** (j + 1)
        dP -= j * a[j] / xm ** (j + 1)
        dR -= j * c[j] / xm ** (j + 1)
        dQ -= (j + 1) * b[j] / xm ** (j + 2)
    g = lm - A / xm - B / xm ** 2
    num = (dP - g * Q, dQ + 2 * P - 2 * g * R, dR + Q)
    rP, rQ, rR = residuals(fc, x)
    assert abs(num[2]) < mp.mpf(10) ** -45 and rR == 0.0
    for got, want in ((rP, num[0]), (rQ, num[1])):
        assert abs(got - float(want)) <= 1e-12 * abs(float(want)) + 1e-300


def test_defect_decays_as_x_doubles():
    p, lam = hydrogen(1, 1.0), 1.0
    for fn in (f2, f3):
        d = [abs(fn(p, lam, x).defect) for x in (20.0, 40.0, 80.0, 160.0)]
        assert all(b < a for a, b in zip(d, d[1:])), (fn.__name__, d)
    c = asymptotic_coeffs(-1.0, 2.0, lam, 6)
    d = [abs(fN(c, x).defect) for x in (20.0, 40.0, 80.0, 160.0)]
    assert all(b < a for a, b in zip(d, d[1:]))


def test_f3_corrects_f2_to_higher_order():
    # the third approximant satisfies 4PR - Q^2 = 4 to higher order than F2
    p, lam = make_barrier(1, 1.0), 5.0
    for x in (20.0, 40.0):
        assert abs(f3(p, lam, x).defect) < 1e-2 * abs(f2(p, lam, x).defect)


def test_fN_small_matching_point():
    c = asymptotic_coeffs(-10.0, 0.0, 1.0, 1)
    assert fN(c, 10.0).R > 0
    with pytest.raises(MatchingPointError):
        fN(c, 2.0)


def test_parse_and_dispatch():
    assert parse_method("f6") == ("fN", 6)
    assert parse_method("fN", 3) == ("fN", 3)
    assert parse_method("F3-literal") == ("F3-literal", None)
    with pytest.raises(ValueError):
        parse_method("F4")
    assert default_order(1e-8) == 10
    p = hydrogen(1, 1.0)
    assert isinstance(approximant(p, 1.0, 50.0, "f4"), AppellState)
    with pytest.raises(DomainError):
        approximant(make_barrier(0, 1.0), 1.0, 50.0, "f4")


@pytest.mark.slow
def test_f3_gate_accepts_corrected_and_rejects_literal():
    good = f3_gate("F3")
    assert good.passed and abs(good.slope - 5.0) <= 0.7
    assert max(good.table_errors) < 1e-9
    bad = f3_gate("F3-literal")
    assert not bad.passed
    assert bad.slope < 4.3 and max(bad.table_errors) > 1e-7
