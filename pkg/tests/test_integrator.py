import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.linalg import expm

from sldensity import _pykernels
from sldensity.errors import DomainError, StiffnessError
from sldensity.frobenius import series_cutoff, start_values
from sldensity.integrator import (IvpState, Shooter, initial_step, integrate,
                                  propagation_matrix, step_exact_kernel)
from sldensity.potentials import Potential, PowerSeriesTail, bessel, hydrogen, make_rational
from sldensity.reference import exact_phi_bessel

CONST4 = Potential(0.0, 0.0, PowerSeriesTail((4.0,)))
FREE = make_rational(0.0, 0.0)


def test_step_free_rotation(backend):
    s = step_exact_kernel(FREE, IvpState(0.1, 0.0, 1.0, 1.0), math.pi / 2, backend)
    assert (s.y, s.dy) == pytest.approx((1.0, 0.0), abs=1e-15)
    assert s.x == pytest.approx(0.1 + math.pi / 2)


def test_step_hyperbolic_branch(backend):
    s = step_exact_kernel(CONST4, IvpState(1.0, 1.0, 0.0, 0.0), 1.0, backend)
    assert s.y == pytest.approx(math.cosh(2.0), rel=1e-15)
    assert s.dy == pytest.approx(2.0 * math.sinh(2.0), rel=1e-15)
    assert (s.y, s.dy) == pytest.approx((3.7621957, 7.2537208), abs=1e-7)


def test_constant_potential_exact_for_any_step(backend):
    lam, h = 13.0, 57.3
    w = math.sqrt(lam - 4.0)
    s = step_exact_kernel(CONST4, IvpState(2.0, 0.3, -0.7, lam), h, backend)
    y = 0.3 * math.cos(w * h) - 0.7 * math.sin(w * h) / w
    dy = -0.3 * w * math.sin(w * h) - 0.7 * math.cos(w * h)
    assert (s.y, s.dy) == pytest.approx((y, dy), abs=1e-13)


def test_free_motion_limit():
    m = propagation_matrix(1e-20, 0.5)
    assert np.allclose(m, [[1.0, 0.5], [0.0, 1.0]], atol=1e-15)
    # both sides of the Taylor switch agree with the exact propagator
    import mpmath as mp
    mp.mp.dps = 40
    for w2 in (1e-8 * (1 - 1e-6), 1e-8 * (1 + 1e-6), -1e-8 * (1 - 1e-6), -1e-8 * (1 + 1e-6)):
        w = mp.sqrt(mp.mpf(w2))
        exact = [[mp.cos(w), mp.sin(w) / w], [-w * mp.sin(w), mp.cos(w)]]
        got = propagation_matrix(w2, 1.0)
        for i in range(2):
            for j in range(2):
                assert abs(got[i][j] - float(mp.re(exact[i][j]))) < 5e-16 * max(1.0, abs(got[i][j]))


def test_step_rejects_bad_input():
    with pytest.raises(DomainError):
        step_exact_kernel(FREE, IvpState(1.0, 1.0, 0.0, 1.0), 0.0)
    with pytest.raises(DomainError):
        IvpState(1.0, math.nan, 0.0, 1.0)


def test_integrate_sine(backend):
    s = integrate(FREE, 1.0, IvpState(0.0, 0.0, 1.0, 1.0), math.pi, 1e-13, backend)
    assert abs(s.y) < 1e-12 and s.dy == pytest.approx(-1.0, abs=1e-12)


def test_bessel_shot_matches_oracle(backend):
    p = bessel(1.0)
    x0 = series_cutoff(p, 1.0)
    assert x0 == 0.75
    x, y, dy, _ = start_values(p, 1.0)
    s = integrate(p, 1.0, IvpState(x, y, dy, 1.0), 10.0, 1e-13, backend)
    assert s.y == pytest.approx(exact_phi_bessel(1.0, 1.0, 10.0), rel=1e-10)


def test_wronskian_is_constant(backend):
    p, lam = hydrogen(1, 1.0), 1.0
    x0 = series_cutoff(p, lam)
    a = Shooter(p, lam, IvpState(x0, 1.0, 0.0, lam), 1e-13, backend)
    b = Shooter(p, lam, IvpState(x0, 0.0, 1.0, lam), 1e-13, backend)
    for x in (5.0, 20.0, 60.0, 100.0):
        sa, sb = a.advance(x), b.advance(x)
        assert sa.y * sb.dy - sb.y * sa.dy == pytest.approx(1.0, abs=1e-10)


def test_midpoint_scheme_is_second_order():
    p, lam = hydrogen(1, 1.0), 1.0
    ref = integrate(p, lam, IvpState(1.0, 1.0, 0.0, lam), 3.0, 1e-14)
    errs, hs = [], [0.1, 0.05, 0.025, 0.0125]
    for h in hs:
        s = IvpState(1.0, 1.0, 0.0, lam)
        for _ in range(int(round(2.0 / h))):
            s = step_exact_kernel(p, s, h)
        errs.append(abs(s.y - ref.y))
    slope = np.polyfit(np.log(hs), np.log(errs), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.2)


def test_quadratic_form_constant_along_appell_solution():
    # same frozen-midpoint scheme applied to the Appell system
    p, lam, h = hydrogen(1, 1.0), 2.0, 0.05
    s = IvpState(1.0, 0.4, 1.3, lam)
    PQR = np.array([1.1, 0.2, 0.9])
    form0 = PQR[0] * s.y**2 + PQR[1] * s.y * s.dy + PQR[2] * s.dy**2
    for _ in range(400):
        g = lam - p(s.x + 0.5 * h)
        M = np.array([[0.0, g, 0.0], [-2.0, 0.0, 2.0 * g], [0.0, -1.0, 0.0]])
        PQR = expm(M * h) @ PQR
        s = step_exact_kernel(p, s, h)
        form = PQR[0] * s.y**2 + PQR[1] * s.y * s.dy + PQR[2] * s.dy**2
        assert form == pytest.approx(form0, rel=1e-8)


def test_shooter_extends_without_recomputing(backend):
    p, lam = hydrogen(1, 1.0), 1.0
    x, y, dy, _ = start_values(p, lam)
    sh = Shooter(p, lam, IvpState(x, y, dy, lam), 1e-12, backend)
    sh.advance(20.0)
    n20 = sh.nsteps
    s40 = sh.advance(40.0)
    direct = integrate(p, lam, IvpState(x, y, dy, lam), 40.0, 1e-12, backend)
    assert sh.nsteps > n20
    assert s40.y == pytest.approx(direct.y, rel=1e-9, abs=1e-9)
    with pytest.raises(DomainError):
        sh.advance(30.0)


def test_stiffness_and_budget_errors(backend):
    p, lam = hydrogen(1, 1.0), 50.0
    x, y, dy, _ = start_values(p, lam)
    sh = Shooter(p, lam, IvpState(x, y, dy, lam), 1e-12, backend, hmin_rel=0.5)
    with pytest.raises(StiffnessError) as ei:
        sh.advance(30.0)
    assert ei.value.x >= x
    sh = Shooter(p, lam, IvpState(x, y, dy, lam), 1e-12, backend, max_steps=5)
    with pytest.raises(StiffnessError, match="budget"):
        sh.advance(30.0)


def test_tolerance_range():
    with pytest.raises(DomainError):
        Shooter(FREE, 1.0, IvpState(1.0, 1.0, 0.0, 1.0), 1e-16)


def test_rescaling_keeps_growing_solutions_finite(backend):
    # strongly repulsive: the solution grows like exp(2000) before x = 1e4
    p, lam = hydrogen(0, -100.0), 0.01
    x, y, dy, _ = start_values(p, lam)
    sh = Shooter(p, lam, IvpState(x, y, dy, lam), 1e-10, backend)
    _, ys, dys, e = sh.advance_scaled(9e3)
    assert e > 0 and math.isfinite(ys) and math.isfinite(dys)
    with pytest.raises(DomainError):
        sh.state  # noqa: B018  (unscaled value overflows)


def test_initial_step_scales_with_wavelength():
    assert initial_step(0.0, 100.0, 0.0) == 0.1
    assert initial_step(0.0, 0.8, 99.0) == pytest.approx(0.05 / (1.0 + math.sqrt(99.0)))


@settings(max_examples=25, deadline=None)
@given(lam=st.floats(0.05, 500.0), ell=st.integers(0, 3), a=st.floats(-2, 2))
def test_backends_agree(lam, ell, a):
    try:
        from sldensity import _kernels
    except ImportError:
        pytest.skip("compiled extension not built")
    p = hydrogen(ell, a)
    x, y, dy, _ = start_values(p, lam)
    x_end = x + 20.0
    outs = [be.propagate(*p.kernel_params(), lam, x, y, dy, x_end, 1e-12, 0.01)
            for be in (_kernels, _pykernels)]
    c, py = outs
    assert c[6] == py[6] == 0 and c[7] == py[7]
    # libm and the C compiler may round differently; results agree to the
    # integration tolerance measured against the solution amplitude
    amp = max(abs(py[1]), abs(py[2]))
    assert abs(c[1] - py[1]) <= 1e-9 * amp
    assert abs(c[2] - py[2]) <= 1e-9 * amp
