"""Fixed-step RK4 integration of the two-atom master equation.

Two independent encodings of the same generator are provided:

* ``lindblad_rhs_bare`` builds the Lindblad right-hand side on full 4x4
  matrices from the atomic raising/lowering operators;
* ``collective_rhs`` uses the closed set of rate equations for the six
  X-state elements in the Dicke basis.

The coefficients are piecewise constant with one jump at ``t = gamma_tau``.
The time grid always contains ``gamma_tau`` as a node, and each piece uses
the rates of its interior, so no RK4 step straddles the jump and the step
starting at ``gamma_tau`` already sees the switched-on couplings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .params import CollectiveRates, SystemParams, collective_rates
from .states import (
    StateError,
    Trajectory,
    XState,
    bare_to_collective,
    collective_to_bare,
    x_leakage,
)

# single-qubit lowering operator |g><e| with |g> = 0, |e> = 1
_LOWER = np.array([[0.0, 1.0], [0.0, 0.0]])
_EYE2 = np.eye(2)
SIGMA_MINUS = (np.kron(_LOWER, _EYE2), np.kron(_EYE2, _LOWER))
SIGMA_PLUS = tuple(op.T.copy() for op in SIGMA_MINUS)

FAILURE_TOL = 1e-8


class IntegrationError(RuntimeError):
    """An integrated state stopped being a density matrix."""


@dataclass(frozen=True)
class IntegratorConfig:
    step: float = 1e-3
    t_max: float = 10.0
    method: str = "rk4"

    def __post_init__(self):
        if not 0.0 < self.step <= 1e-2:
            raise ValueError(f"step must lie in (0, 1e-2], got {self.step}")
        if not self.t_max > 0.0:
            raise ValueError(f"t_max must be > 0, got {self.t_max}")
        if self.method != "rk4":
            raise ValueError(f"unknown method {self.method!r}")


def _rates_matrices(rates: CollectiveRates) -> tuple[np.ndarray, np.ndarray]:
    gamma = np.array([[1.0, rates.gamma_12], [rates.gamma_12, 1.0]])
    omega = np.array([[0.0, rates.omega_12], [rates.omega_12, 0.0]])
    return gamma, omega


def lindblad_rhs_bare(params: SystemParams, t: float, rho: np.ndarray, rates: CollectiveRates | None = None) -> np.ndarray:
    """Time derivative of a bare-basis density matrix.

    ``rho`` may carry leading batch axes. ``rates`` overrides the
    time lookup, which the integrator uses to pin the rates of a whole piece.
    """
    if rates is None:
        rates = collective_rates(params, t)
    gamma, omega = _rates_matrices(rates)
    out = np.zeros_like(rho, dtype=complex)
    for i in range(2):
        for j in range(2):
            hop = SIGMA_PLUS[i] @ SIGMA_MINUS[j]
            if gamma[i, j] != 0.0:
                jump = SIGMA_MINUS[i] @ rho @ SIGMA_PLUS[j]
                out -= 0.5 * gamma[i, j] * (rho @ hop + hop @ rho - 2.0 * jump)
            if i != j and omega[i, j] != 0.0:
                out -= 1j * omega[i, j] * (hop @ rho - rho @ hop)
    return out


def _collective_rhs_array(rates: CollectiveRates, y: np.ndarray) -> np.ndarray:
    # trailing axis: (ee, ss, aa, as, eg, gg)
    g12, w12 = rates.gamma_12, rates.omega_12
    ee, ss, aa, a_s, eg = (y[..., k] for k in range(5))
    d_ee = -2.0 * ee
    d_ss = -(1.0 + g12) * (ss - ee)
    d_aa = -(1.0 - g12) * (aa - ee)
    d_as = -(1.0 + 2j * w12) * a_s
    d_eg = -eg
    d_gg = -(d_ee + d_ss + d_aa)
    return np.stack([d_ee, d_ss, d_aa, d_as, d_eg, d_gg], axis=-1)


def collective_rhs(params: SystemParams, t: float, x: XState) -> XState:
    """Rate equations for the X-state elements in the Dicke basis."""
    return XState.from_array(_collective_rhs_array(collective_rates(params, t), x.as_array()))


def rk4_step(f: Callable[[np.ndarray], np.ndarray], y: np.ndarray, h: float) -> np.ndarray:
    """One classical Runge-Kutta step of the autonomous system ``y' = f(y)``."""
    k1 = f(y)
    k2 = f(y + 0.5 * h * k1)
    k3 = f(y + 0.5 * h * k2)
    k4 = f(y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def time_grid(t_max: float, step: float, breaks: Iterable[float] = ()) -> list[np.ndarray]:
    """Split ``[0, t_max]`` at ``breaks`` and subdivide each piece into steps <= ``step``.

    Returns one array of nodes per piece; consecutive pieces share endpoints.
    """
    knots = sorted({0.0, float(t_max), *(float(b) for b in breaks if 0.0 < b < t_max)})
    pieces = []
    for a, b in zip(knots[:-1], knots[1:]):
        n = max(1, math.ceil((b - a) / step - 1e-9))
        nodes = np.linspace(a, b, n + 1)
        nodes[0], nodes[-1] = a, b
        pieces.append(nodes)
    return pieces


def integrate(
    params: SystemParams,
    init: XState,
    config: IntegratorConfig = IntegratorConfig(),
    basis: str = "collective",
    t_eval: Iterable[float] | None = None,
) -> Trajectory:
    """Integrate from ``init`` over ``[0, config.t_max]`` with fixed-step RK4.

    Parameters
    ----------
    basis : {"collective", "bare"}
        Which encoding of the generator to integrate.
    t_eval : iterable of float, optional
        Output times. They are inserted as grid nodes; without them every
        grid node is returned.

    Raises
    ------
    IntegrationError
        If a stored state drifts from unit trace or Hermiticity by more than
        1e-8, or (bare basis) leaves the X family.
    """
    if basis not in ("collective", "bare"):
        raise ValueError(f"basis must be 'collective' or 'bare', got {basis!r}")
    init.check()
    t_max = config.t_max
    wanted = None
    breaks = [params.gamma_tau]
    if t_eval is not None:
        wanted = np.unique(np.asarray(list(t_eval), dtype=float))
        if wanted.size == 0 or wanted[0] < 0 or wanted[-1] > t_max + 1e-12:
            raise ValueError("t_eval must lie within [0, t_max]")
        breaks += list(wanted)
    pieces = time_grid(t_max, config.step, breaks)

    if basis == "bare":
        y = collective_to_bare(init).reshape(16)
        unit = np.eye(16, dtype=complex).reshape(16, 4, 4)

        def step_matrix(rates, h):
            f = lambda m: lindblad_rhs_bare(params, 0.0, m, rates=rates)  # noqa: E731
            return rk4_step(f, unit, h).reshape(16, 16).T
    else:
        y = init.as_array()
        unit = np.eye(6, dtype=complex)

        def step_matrix(rates, h):
            f = lambda m: _collective_rhs_array(rates, m)  # noqa: E731
            return rk4_step(f, unit, h).T

    times = [0.0]
    stored = [y.copy()]
    for nodes in pieces:
        a, b = nodes[0], nodes[-1]
        rates = collective_rates(params, 0.5 * (a + b))
        n = len(nodes) - 1
        prop = step_matrix(rates, (b - a) / n)
        for k in range(1, n + 1):
            y = prop @ y
            if wanted is None or k == n:
                times.append(nodes[k])
                stored.append(y.copy())

    times = np.array(times)
    stored = np.array(stored)
    if wanted is not None:
        keep = np.isin(times, wanted)
        times, stored = times[keep], stored[keep]

    if basis == "bare":
        mats = stored.reshape(-1, 4, 4)
    else:
        mats = collective_to_bare(XState.from_array(stored))
    diag = _diagnostics(mats)
    if diag["trace_drift"] > FAILURE_TOL or diag["hermiticity"] > FAILURE_TOL:
        raise IntegrationError(
            f"state degraded: trace drift {diag['trace_drift']:.3e}, "
            f"hermiticity {diag['hermiticity']:.3e}"
        )
    if basis == "bare":
        try:
            states = bare_to_collective(mats)
        except StateError as exc:
            raise IntegrationError(str(exc)) from exc
    else:
        states = XState.from_array(stored)
        if np.ndim(states.rho_ee) == 0:
            states = XState.from_array(stored[None, :])
    return Trajectory(t=times, states=states, meta={"basis": basis, "step": config.step, **diag})


def _diagnostics(mats: np.ndarray) -> dict:
    herm = np.abs(mats - np.swapaxes(mats.conj(), -1, -2)).max()
    trace = np.trace(mats, axis1=-2, axis2=-1)
    eig = np.linalg.eigvalsh(0.5 * (mats + np.swapaxes(mats.conj(), -1, -2)))
    return {
        "trace_drift": float(np.abs(trace - 1.0).max()),
        "hermiticity": float(herm),
        "min_eigenvalue": float(eig.min()),
        "x_leakage": float(x_leakage(mats).max()),
    }
