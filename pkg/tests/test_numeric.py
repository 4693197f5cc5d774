import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_xstate
from twoatom.closed_form import evolve_closed_form
from twoatom.numeric import (
    IntegrationError,
    IntegratorConfig,
    collective_rhs,
    integrate,
    lindblad_rhs_bare,
    time_grid,
)
from twoatom.params import SystemParams
from twoatom.states import XState, both_excited_initial, collective_to_bare, one_excited_initial


def _proj(k):
    m = np.zeros((4, 4), dtype=complex)
    m[k, k] = 1
    return m


def test_ground_state_is_stationary():
    p = SystemParams(0.8, 0.3, 0.4)
    assert np.abs(lindblad_rhs_bare(p, 2.0, _proj(0))).max() == 0.0
    x = collective_rhs(p, 2.0, XState(rho_gg=1.0))
    assert np.abs(x.as_array()).max() == 0.0


def test_doubly_excited_decays_at_twice_the_rate():
    d = lindblad_rhs_bare(SystemParams(0.8, 0.3, 0.4), 2.0, _proj(3))
    assert d[3, 3] == pytest.approx(-2.0)
    assert d[1, 1] == pytest.approx(1.0) and d[2, 2] == pytest.approx(1.0)
    assert d[1, 2] == pytest.approx(0.8 * math.cos(0.3))


def test_single_atom_decay_before_delay():
    d = lindblad_rhs_bare(SystemParams(1.0, 0.0, 0.4), 0.2, _proj(2))
    expected = np.zeros((4, 4))
    expected[2, 2], expected[0, 0] = -1.0, 1.0
    np.testing.assert_allclose(d, expected, atol=1e-15)


def test_dark_state_after_delay():
    # antisymmetric state is decoherence free when c = 1
    p = SystemParams(1.0, 2 * math.pi, 0.4)
    rho = collective_to_bare(XState(rho_aa=1.0))
    assert np.abs(lindblad_rhs_bare(p, 1.0, rho)).max() < 1e-15
    assert np.abs(lindblad_rhs_bare(SystemParams(1.0, 2 * math.pi, 0.4), 0.2, rho)).max() > 0.5


def test_symmetric_dark_state_at_odd_phase():
    p = SystemParams(1.0, math.pi, 0.4)
    rho = collective_to_bare(XState(rho_ss=1.0))
    assert np.abs(lindblad_rhs_bare(p, 1.0, rho)).max() < 1e-15


def test_bare_and_collective_rhs_agree(rng):
    for _ in range(50):
        p = SystemParams(rng.uniform(0, 1), rng.uniform(0, 7), 0.4)
        x = random_xstate(rng)
        t = rng.uniform(0, 3)
        bare = lindblad_rhs_bare(p, t, collective_to_bare(x))
        coll = collective_to_bare(collective_rhs(p, t, x))
        np.testing.assert_allclose(bare, coll, atol=1e-14)


def test_time_grid_contains_breaks():
    pieces = time_grid(1.0, 0.3, [0.4, 0.45])
    assert [(p[0], p[-1]) for p in pieces] == [(0.0, 0.4), (0.4, 0.45), (0.45, 1.0)]
    assert all(np.diff(p).max() <= 0.3 + 1e-15 for p in pieces)


@pytest.mark.parametrize("basis", ["bare", "collective"])
@pytest.mark.parametrize("init", [one_excited_initial(), both_excited_initial()], ids=["one", "both"])
def test_rk4_matches_closed_form(basis, init):
    p = SystemParams(0.75, 2.3, 0.4)
    traj = integrate(p, init, IntegratorConfig(t_max=10.0), basis=basis)
    exact = evolve_closed_form(p, init, traj.t)
    assert np.abs(traj.states.as_array() - exact.as_array()).max() < 1e-8
    assert traj.meta["trace_drift"] < 1e-9
    assert traj.meta["min_eigenvalue"] > -1e-8
    assert traj.meta["x_leakage"] < 1e-9


def test_no_lens_analytic():
    traj = integrate(SystemParams(0.0, 0.0, 0.4), both_excited_initial(), IntegratorConfig(t_max=5.0))
    t = traj.t
    np.testing.assert_allclose(traj.states.rho_ee, np.exp(-2 * t), atol=1e-10)
    np.testing.assert_allclose(traj.states.rho_ss, np.exp(-t) * (1 - np.exp(-t)), atol=1e-10)


def test_t_eval_returns_requested_times():
    t_eval = [0.0, 0.4, 1.234, 3.0]
    traj = integrate(SystemParams(0.5, 1.0, 0.4), one_excited_initial(), IntegratorConfig(t_max=3.0), t_eval=t_eval)
    np.testing.assert_array_equal(traj.t, t_eval)
    with pytest.raises(ValueError):
        integrate(SystemParams(0.5, 1.0, 0.4), one_excited_initial(), IntegratorConfig(t_max=3.0), t_eval=[4.0])


def test_fourth_order_convergence():
    p = SystemParams(0.9, 1.0, 0.4)
    init = both_excited_initial()
    t_eval = [6.0]
    exact = evolve_closed_form(p, init, 6.0).as_array()
    errs = []
    for h in (1e-2, 5e-3):
        traj = integrate(p, init, IntegratorConfig(step=h, t_max=6.0), basis="collective", t_eval=t_eval)
        errs.append(np.abs(traj.states.as_array()[-1] - exact).max())
    assert 12 < errs[0] / errs[1] < 20


@settings(max_examples=25, deadline=None)
@given(st.floats(0, 1), st.floats(0, 2 * math.pi), st.floats(0, 2), st.integers(0, 2**32 - 1))
def test_integration_keeps_density_matrix(kappa, phase, tau, seed):
    x0 = random_xstate(np.random.default_rng(seed))
    traj = integrate(SystemParams(kappa, phase, tau), x0, IntegratorConfig(step=1e-2, t_max=5.0), basis="bare")
    assert traj.meta["trace_drift"] < 1e-9
    assert traj.meta["hermiticity"] < 1e-12
    assert traj.meta["min_eigenvalue"] > -1e-8
    assert traj.meta["x_leakage"] < 1e-9


@pytest.mark.parametrize("kwargs", [{"step": 0.0}, {"step": 0.05}, {"t_max": -1.0}, {"method": "euler"}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        IntegratorConfig(**kwargs)


def test_bad_basis_and_invalid_initial_state():
    p = SystemParams(0.5, 0.0, 0.4)
    with pytest.raises(ValueError):
        integrate(p, one_excited_initial(), basis="dicke")
    with pytest.raises(ValueError):
        integrate(p, XState(rho_ss=2.0))


def test_integration_error_is_runtime_error():
    assert issubclass(IntegrationError, RuntimeError)
