import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twoatom.geometry import kappa_cone_analytic, kappa_from_cone
from twoatom.params import SystemParams, collective_energies, collective_rates


def test_rates_vanish_before_delay():
    r = collective_rates(SystemParams(0.5, 0.3, 0.4), 0.2)
    assert (r.gamma_12, r.omega_12) == (0.0, 0.0)


def test_rates_at_delay_are_zero():
    r = collective_rates(SystemParams(1.0, 0.3, 0.4), 0.4)
    assert (r.gamma_12, r.omega_12) == (0.0, 0.0)


@pytest.mark.parametrize(
    "kappa, phase, expected",
    [(1.0, math.pi / 2, (0.0, 0.5)), (0.5, 2 * math.pi, (0.5, 0.0))],
)
def test_rates_after_delay(kappa, phase, expected):
    r = collective_rates(SystemParams(kappa, phase, 0.4), 1.0)
    assert r.gamma_12 == pytest.approx(expected[0], abs=1e-15)
    assert r.omega_12 == pytest.approx(expected[1], abs=1e-15)


@given(
    st.floats(0, 1),
    st.floats(-20, 20),
    st.floats(0, 5),
    st.floats(0, 20),
)
def test_rates_piecewise_and_bounded(kappa, phase, gtau, t):
    p = SystemParams(kappa, phase, gtau)
    r = collective_rates(p, t)
    if t <= gtau:
        assert r.gamma_12 == 0.0 and r.omega_12 == 0.0
    else:
        assert math.hypot(r.gamma_12, 2 * r.omega_12) == pytest.approx(kappa, abs=1e-12)
        assert abs(r.gamma_12) <= kappa and abs(r.omega_12) <= kappa / 2


def test_rates_reject_negative_time():
    with pytest.raises(ValueError):
        collective_rates(SystemParams(0.5, 0.0, 0.4), -1.0)


@pytest.mark.parametrize("kwargs", [dict(kappa=1.2, phase=0, gamma_tau=0.4), dict(kappa=0.5, phase=0, gamma_tau=-0.1)])
def test_params_validation(kwargs):
    with pytest.raises(ValueError):
        SystemParams(**kwargs)


@pytest.mark.parametrize(
    "kappa, phase, expected",
    [
        (1.0, math.pi / 2, (0.0, 9.5, 10.5, 20.0)),
        (0.0, 0.3, (0.0, 10.0, 10.0, 20.0)),
        (0.5, math.pi, (0.0, 10.0, 10.0, 20.0)),
    ],
)
def test_collective_energies(kappa, phase, expected):
    got = collective_energies(SystemParams(kappa, phase, 0.4), omega_0=10.0)
    assert got == pytest.approx(expected, abs=1e-14)


def _fixed_grid_kappa(alpha, n=400):
    # independent oracle: tensor Gauss-Legendre rule over the cap, dipole and cone both along z
    x, w = np.polynomial.legendre.leggauss(n)
    theta = 0.5 * alpha * (x + 1)
    integrand = (1 - np.cos(theta) ** 2) * np.sin(theta) * 2 * np.pi
    return 3 / (8 * np.pi) * 0.5 * alpha * np.sum(w * integrand)


def test_kappa_half_sphere():
    assert kappa_from_cone(math.pi / 2, 0.0) == pytest.approx(0.5, abs=1e-8)
    assert _fixed_grid_kappa(math.pi / 2) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("tilt", [0.0, 0.3, math.pi / 2])
def test_kappa_endpoints_exact(tilt):
    assert kappa_from_cone(math.pi, tilt) == 1.0
    assert kappa_from_cone(0.0, tilt) == 0.0


def test_kappa_matches_closed_form_on_100_angles():
    for alpha in np.linspace(0.01, math.pi - 0.01, 100):
        assert kappa_from_cone(alpha, 0.0) == pytest.approx(kappa_cone_analytic(alpha), abs=1e-8)


def test_kappa_closed_form_matches_fixed_grid():
    for alpha in (0.2, 1.0, 2.5):
        assert kappa_cone_analytic(alpha) == pytest.approx(_fixed_grid_kappa(alpha), abs=1e-12)


def test_tilted_cone_against_fixed_grid():
    # 2D product rule in cone-centred coordinates for a tilted axis
    alpha, beta = 0.7, 0.9
    x, w = np.polynomial.legendre.leggauss(200)
    th = 0.5 * alpha * (x + 1)
    ph = np.pi * (x + 1)
    T, P = np.meshgrid(th, ph, indexing="ij")
    kz = np.cos(T) * np.cos(beta) - np.sin(T) * np.cos(P) * np.sin(beta)
    vals = (1 - kz**2) * np.sin(T)
    integral = 0.5 * alpha * np.pi * np.einsum("i,j,ij->", w, w, vals)
    assert kappa_from_cone(alpha, beta) == pytest.approx(3 / (8 * np.pi) * integral, abs=1e-9)


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, math.pi), st.floats(0.0, math.pi), st.floats(0.0, math.pi / 2))
def test_kappa_monotone_in_half_angle(a, b, tilt):
    lo, hi = sorted((a, b))
    assert kappa_from_cone(lo, tilt) <= kappa_from_cone(hi, tilt) + 1e-9


@pytest.mark.parametrize("args", [(-0.1, 0.0), (3.5, 0.0), (1.0, 2.0)])
def test_kappa_domain_errors(args):
    with pytest.raises(ValueError):
        kappa_from_cone(*args)
