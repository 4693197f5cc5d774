"""Wootters concurrence and detection of entanglement birth/death events."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .closed_form import both_excited_solution
from .params import SystemParams
from .states import StateError, Trajectory, XState

logger = logging.getLogger(__name__)

SIGMA_YY = np.kron(np.array([[0, -1j], [1j, 0]]), np.array([[0, -1j], [1j, 0]]))

CLAMP_TOL = 1e-10
INVALID_TOL = 1e-8
BISECT_TOL = 1e-6
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def concurrence_general(rho: np.ndarray) -> float:
    """Wootters concurrence of an arbitrary two-qubit density matrix.

    The square roots of the eigenvalues of ``rho @ rho_tilde`` are obtained
    as the singular values of ``sqrt(rho) @ sqrt(rho_tilde)``, which avoids
    taking square roots of eigenvalues that are zero up to rounding.

    Raises
    ------
    StateError
        If ``rho`` has an eigenvalue below -1e-8.
    """
    rho = np.asarray(rho, dtype=complex)
    rho = 0.5 * (rho + rho.conj().T)
    w, v = np.linalg.eigh(rho)
    if w.min() < -INVALID_TOL:
        raise StateError(f"not positive semidefinite (eigenvalue {w.min():.3e})")
    w = np.where(w < CLAMP_TOL, np.maximum(w, 0.0), w)
    root = (v * np.sqrt(w)) @ v.conj().T
    root_tilde = SIGMA_YY @ root.conj() @ SIGMA_YY
    sv = np.linalg.svd(root @ root_tilde, compute_uv=False)
    value = sv[0] - sv[1] - sv[2] - sv[3]
    return float(value) if value > 0.0 else 0.0


def _x_branches(x: XState):
    ss, aa, ee = np.asarray(x.rho_ss), np.asarray(x.rho_aa), np.asarray(x.rho_ee)
    gg = np.asarray(x.rho_gg)
    a_s, eg = np.asarray(x.rho_as), np.asarray(x.rho_eg)
    c1 = 2.0 * np.abs(eg) - np.sqrt(np.maximum((ss + aa) ** 2 - (2.0 * a_s.real) ** 2, 0.0))
    c2 = np.hypot(ss - aa, 2.0 * a_s.imag) - 2.0 * np.sqrt(np.maximum(ee * gg, 0.0))
    return c1, c2


def concurrence_x(x: XState):
    """Concurrence of an X-state from its collective-basis elements.

    Vectorised: array-valued fields give an array of concurrences.
    """
    c1, c2 = _x_branches(x)
    c = np.maximum(np.maximum(c1, c2), 0.0)
    return float(c) if c.ndim == 0 else c


def signed_concurrence_x(x: XState):
    """Larger X-state branch before clipping at zero.

    Crosses zero linearly where entanglement is born or dies, so it is the
    right quantity to interpolate between samples.
    """
    c1, c2 = _x_branches(x)
    c = np.maximum(c1, c2)
    return float(c) if c.ndim == 0 else c


def concurrence_closed_one_excited(params: SystemParams, t):
    """Concurrence for atom 1 initially excited, directly from the analytic result."""
    t = np.asarray(t, dtype=float)
    after = t > params.gamma_tau
    dt = np.where(after, t - params.gamma_tau, 0.0)
    c = np.exp(-t) * np.hypot(np.sinh(params.c * dt), np.sin(params.s * dt))
    c = np.where(after, c, 0.0)
    return float(c) if c.ndim == 0 else c


def both_excited_printed_c2(params: SystemParams, t):
    """The published closed expression for C2 with both atoms initially excited.

    Kept verbatim for auditing only; it disagrees with the concurrence
    computed from the populations (see ``concurrence_closed_both_excited``).
    """
    t = np.asarray(t, dtype=float)
    tau, c = params.gamma_tau, params.c
    after = t > tau
    dt = np.where(after, t - tau, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = (1.0 + c) / (1.0 - c)
        bracket = (
            np.exp(-tau) * (ratio * np.exp(-c * dt) - np.exp(c * dt) / ratio)
            + 2.0 * (1.0 - np.exp(-tau)) * np.sinh(c * dt)
            - 4.0 * c / (1.0 - c * c) * np.exp(-t)
        )
    value = np.where(after, np.exp(-t) * bracket, 0.0)
    return float(value) if value.ndim == 0 else value


def concurrence_closed_both_excited(params: SystemParams, t):
    """Concurrence for both atoms initially excited.

    Evaluated from the closed-form populations. The published bracket
    expression is computed alongside and its residual logged at DEBUG level
    when it exceeds 1e-9; the population route is returned.
    """
    value = concurrence_x(both_excited_solution(params, t))
    if logger.isEnabledFor(logging.DEBUG):
        printed = np.maximum(both_excited_printed_c2(params, t), 0.0)
        residual = float(np.nanmax(np.abs(printed - value)))
        if residual > 1e-9:
            logger.debug("printed C2 expression deviates by %.3e at %s", residual, params)
    return value


def concurrence_function(params: SystemParams, scenario: str) -> Callable:
    """Continuous-time concurrence for a named initial condition."""
    if scenario == "one_excited":
        return lambda t: concurrence_closed_one_excited(params, t)
    if scenario == "both_excited":
        return lambda t: concurrence_closed_both_excited(params, t)
    raise ValueError(f"unknown scenario {scenario!r}")


@dataclass
class EntanglementEvents:
    birth_times: list = field(default_factory=list)
    death_times: list = field(default_factory=list)
    peak: tuple = (0.0, 0.0)

    def as_dict(self, digits: int = 6) -> dict:
        return {
            "births": [round(float(t), digits) for t in self.birth_times],
            "deaths": [round(float(t), digits) for t in self.death_times],
            "peak": {"t": round(float(self.peak[0]), digits), "c": round(float(self.peak[1]), digits)},
        }


def _bisect(g, lo, hi, tol=BISECT_TOL / 4):
    """Root of the sign change of ``g`` on ``[lo, hi]``; ``g(lo) <= 0 < g(hi)`` or reverse."""
    glo = g(lo) > 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (g(mid) > 0) == glo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def golden_section(f, lo, hi, maximize=False, xtol=1e-10):
    """Extremum of a unimodal function on ``[lo, hi]`` by golden-section search."""
    sign = -1.0 if maximize else 1.0
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = sign * f(x1), sign * f(x2)
    while b - a > xtol:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = sign * f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = sign * f(x2)
    x = 0.5 * (a + b)
    return x, f(x)


def detect_events(curve: Trajectory, zero_tol: float = 1e-9, func: Callable | None = None) -> EntanglementEvents:
    """Locate entanglement births, deaths and the global peak.

    Sign changes of ``C - zero_tol`` on the sampled grid are refined by
    bisection to within 1e-6. Grid-level local minima that stay above the
    threshold are checked for a zero between samples, which catches
    concurrence curves that touch zero at an isolated instant. Refinement
    uses ``func`` (continuous-time concurrence) when given, otherwise linear
    interpolation of the samples.
    """
    t = np.asarray(curve.t, dtype=float)
    c = np.asarray(curve.concurrence, dtype=float)
    if func is None:
        func = lambda s: float(np.interp(s, t, c))  # noqa: E731
    g = lambda s: float(func(s)) - zero_tol  # noqa: E731
    above = c > zero_tol

    events = []  # (time, kind)
    for i in range(len(t) - 1):
        if above[i] != above[i + 1]:
            root = _bisect(g, t[i], t[i + 1])
            events.append((root, "birth" if above[i + 1] else "death"))
        elif above[i] and 0 < i < len(t) - 1 and c[i] <= c[i - 1] and c[i] <= c[i + 1]:
            tmin, cmin = golden_section(func, t[i - 1], t[i + 1])
            if cmin <= zero_tol:
                events.append((_bisect(g, t[i - 1], tmin), "death"))
                events.append((_bisect(g, tmin, t[i + 1]), "birth"))

    events.sort()
    births = [s for s, kind in events if kind == "birth"]
    deaths = [s for s, kind in events if kind == "death"]

    k = int(np.argmax(c))
    peak = (float(t[k]), float(c[k]))
    if c[k] > 0.0:
        lo, hi = t[max(k - 1, 0)], t[min(k + 1, len(t) - 1)]
        tp, cp = golden_section(func, lo, hi, maximize=True)
        if cp >= c[k]:
            peak = (float(tp), float(cp))
    return EntanglementEvents(births, deaths, peak)
