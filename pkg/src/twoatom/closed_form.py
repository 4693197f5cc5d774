"""Exact piecewise solutions for the X-state elements.

Before the delay the atoms decay independently; after it the symmetric and
antisymmetric channels decay at ``1 + c`` and ``1 - c`` with
``c = kappa*cos(phase)``, and the a-s coherence rotates at ``s = kappa*sin(phase)``.
All functions accept a scalar time or a numpy array of times.
"""

from __future__ import annotations

import numpy as np

from .params import SystemParams
from .states import XState, _scalarize

# below this |1 -/+ c| the feeding term is evaluated from its series limit
DEGENERATE_TOL = 1e-6


def _growth_ratio(x: float, dt: np.ndarray) -> np.ndarray:
    """``(exp(x*dt) - 1)/x``, continuous through ``x = 0``."""
    if abs(x) < DEGENERATE_TOL:
        xd = x * dt
        return dt * (1.0 + xd / 2.0 + xd * xd / 6.0)
    return np.expm1(x * dt) / x


def _feed(c: float, t: np.ndarray, dt: np.ndarray) -> np.ndarray:
    """``(1+c)/(1-c) * (exp(-(tau + c*dt)) - exp(-t))`` with ``dt = t - tau``.

    Population of a single-excitation channel fed from |e> after the delay.
    Rewritten as ``(1+c) exp(-t) (exp((1-c) dt) - 1)/(1-c)`` so that the
    ``c -> 1`` limit ``2 dt exp(-t)`` comes out without cancellation.
    """
    return (1.0 + c) * np.exp(-t) * _growth_ratio(1.0 - c, dt)


def _pack(t, **elements) -> XState:
    x = XState(**elements)
    return _scalarize(x) if np.ndim(t) == 0 else x


def evolve_closed_form(params: SystemParams, init: XState, t) -> XState:
    """Evaluate the analytic solution from an arbitrary X-form initial state.

    ``rho_gg`` follows from normalisation. At ``t == gamma_tau`` the
    pre-delay branch is used.
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    tau, c, s = params.gamma_tau, params.c, params.s
    after = t > tau
    dt = np.where(after, t - tau, 0.0)
    decay = np.exp(-t)

    ee0, ss0, aa0 = init.rho_ee, init.rho_ss, init.rho_aa
    rho_ee = ee0 * np.exp(-2.0 * t)
    rho_eg = init.rho_eg * decay

    free_pop = ee0 * decay * (1.0 - decay)
    fed_s = ee0 * decay * (_feed(c, t, dt) + (1.0 - np.exp(-tau)) * np.exp(-c * dt))
    fed_a = ee0 * decay * (_feed(-c, t, dt) + (1.0 - np.exp(-tau)) * np.exp(c * dt))

    rho_ss = np.where(after, ss0 * np.exp(-t - c * dt) + fed_s, ss0 * decay + free_pop)
    rho_aa = np.where(after, aa0 * np.exp(-t + c * dt) + fed_a, aa0 * decay + free_pop)
    rho_as = init.rho_as * np.exp(-t - 1j * s * dt)

    return _pack(
        t,
        rho_ee=rho_ee,
        rho_ss=rho_ss,
        rho_aa=rho_aa,
        rho_as=rho_as,
        rho_eg=rho_eg * np.ones_like(t),
        rho_gg=1.0 - rho_ee - rho_ss - rho_aa,
    )


def one_excited_solution(params: SystemParams, t) -> XState:
    """Atom 1 initially excited, atom 2 in its ground state."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    dt = np.where(t > params.gamma_tau, t - params.gamma_tau, 0.0)
    c, s = params.c, params.s
    rho_ss = 0.5 * np.exp(-(t + c * dt))
    rho_aa = 0.5 * np.exp(-(t - c * dt))
    rho_as = 0.5 * np.exp(-(t + 1j * s * dt))
    zero = np.zeros_like(t)
    return _pack(
        t,
        rho_ee=zero,
        rho_ss=rho_ss,
        rho_aa=rho_aa,
        rho_as=rho_as,
        rho_eg=zero.astype(complex),
        rho_gg=1.0 - rho_ss - rho_aa,
    )


def both_excited_solution(params: SystemParams, t) -> XState:
    """Both atoms initially excited; only populations are ever non-zero."""
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be >= 0")
    tau, c = params.gamma_tau, params.c
    after = t > tau
    dt = np.where(after, t - tau, 0.0)
    decay = np.exp(-t)
    rho_ee = np.exp(-2.0 * t)
    before = decay * (1.0 - decay)
    tail = 1.0 - np.exp(-tau)
    rho_ss = np.where(after, decay * (_feed(c, t, dt) + tail * np.exp(-c * dt)), before)
    rho_aa = np.where(after, decay * (_feed(-c, t, dt) + tail * np.exp(c * dt)), before)
    zero = np.zeros_like(t, dtype=complex)
    return _pack(
        t,
        rho_ee=rho_ee,
        rho_ss=rho_ss,
        rho_aa=rho_aa,
        rho_as=zero,
        rho_eg=zero,
        rho_gg=1.0 - rho_ee - rho_ss - rho_aa,
    )

