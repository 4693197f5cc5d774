"""Preset figure configurations and parameter sweeps over the closed-form solution."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .closed_form import both_excited_solution, one_excited_solution
from .entanglement import concurrence_function, concurrence_x
from .numeric import IntegratorConfig, integrate
from .params import SystemParams
from .states import Trajectory, both_excited_initial, one_excited_initial

GAMMA_TAU = 0.4
FIG_KAPPAS = (0.4, 0.6, 0.8, 1.0)
OUTPUT_NAMES = ("concurrence", "rho_ee", "rho_ss", "rho_aa", "re_rho_as", "im_rho_as", "rho_gg")

_SOLUTIONS = {"one_excited": one_excited_solution, "both_excited": both_excited_solution}
_INITIAL = {"one_excited": one_excited_initial, "both_excited": both_excited_initial}


@dataclass(frozen=True)
class Scenario:
    name: str
    initial: str
    params: SystemParams
    t_max: float
    outputs: tuple = ("concurrence",)

    def __post_init__(self):
        if self.initial not in _SOLUTIONS:
            raise ValueError(f"unknown initial condition {self.initial!r}")
        if not self.t_max > 0:
            raise ValueError("t_max must be > 0")
        bad = set(self.outputs) - set(OUTPUT_NAMES)
        if bad:
            raise ValueError(f"unknown outputs {sorted(bad)}")


def sample_times(t_max: float, dt: float) -> np.ndarray:
    """Uniform grid ``0, dt, ..., t_max``; ``t_max`` must be a multiple of ``dt``."""
    n = round(t_max / dt)
    if n < 1 or abs(n * dt - t_max) > 1e-9 * max(1.0, t_max):
        raise ValueError(f"t_max={t_max} is not a multiple of dt={dt}")
    return np.round(np.arange(n + 1) * dt, 12)


def run_scenario(s: Scenario, dt_sample: float = 0.01, check_numeric: bool = True) -> Trajectory:
    """Sample the closed-form solution and concurrence of a scenario.

    With ``check_numeric`` the bare-basis RK4 solution is computed on the
    same grid and its largest elementwise deviation stored as
    ``meta["residual"]`` together with the integrator diagnostics.
    """
    if not 0 < dt_sample <= 1e-2:
        raise ValueError("dt_sample must lie in (0, 1e-2]")
    t = sample_times(s.t_max, dt_sample)
    states = _SOLUTIONS[s.initial](s.params, t)
    traj = Trajectory(t=t, states=states, concurrence=concurrence_x(states), meta={"scenario": s.name})
    if check_numeric:
        numeric = integrate(
            s.params, _INITIAL[s.initial](), IntegratorConfig(t_max=s.t_max), basis="bare", t_eval=t
        )
        traj.meta["residual"] = float(np.abs(numeric.states.as_array() - states.as_array()).max())
        traj.meta.update({k: v for k, v in numeric.meta.items() if k not in ("basis", "step")})
    return traj


@dataclass(frozen=True)
class SweepGrid:
    """Product grid over one or two parameters around a scenario template."""

    template: Scenario
    axis1: tuple
    axis2: tuple | None = None
    dt: float = 0.05

    def __post_init__(self):
        for axis in filter(None, (self.axis1, self.axis2)):
            name, values = axis
            if name not in ("kappa", "phase", "gamma_tau"):
                raise ValueError(f"cannot sweep {name!r}")
            v = np.asarray(values, dtype=float)
            if v.size == 0 or np.any(np.diff(v) <= 0):
                raise ValueError(f"values for {name!r} must be nonempty and strictly increasing")

    @property
    def columns(self) -> list[str]:
        names = [self.axis1[0]] + ([self.axis2[0]] if self.axis2 else [])
        return names + ["t", "concurrence"]


def run_sweep(grid: SweepGrid, workers: int = 1) -> np.ndarray:
    """Closed-form concurrence on the product grid.

    Returns an array with one row per (axis values, time), ordered by
    axis1, then axis2, then time; column names are ``grid.columns``.
    """
    t = sample_times(grid.template.t_max, grid.dt)
    axes = [grid.axis1] + ([grid.axis2] if grid.axis2 else [])
    points = [()]
    for name, values in axes:
        points = [p + ((name, float(v)),) for p in points for v in values]

    def evaluate(point):
        params = replace(grid.template.params, **dict(point))
        c = concurrence_function(params, grid.template.initial)(t)
        block = np.empty((len(t), len(point) + 2))
        for k, (_, v) in enumerate(point):
            block[:, k] = v
        block[:, -2] = t
        block[:, -1] = c
        return block

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(evaluate, points))
    else:
        blocks = [evaluate(p) for p in points]
    return np.vstack(blocks)


@dataclass(frozen=True)
class FigureSpec:
    number: int
    curves: dict = field(default_factory=dict)  # label -> Scenario
    sweep: SweepGrid | None = None
    sweep_label: str = "surface"


def _kappa_series(fig: int, phase: float, t_max: float) -> dict:
    return {
        f"kappa{k:g}": Scenario(f"fig{fig}_kappa{k:g}", "one_excited", SystemParams(k, phase, GAMMA_TAU), t_max)
        for k in FIG_KAPPAS
    }


def _phase_sweep(initial: str) -> SweepGrid:
    template = Scenario(f"{initial}_phase_sweep", initial, SystemParams(0.5, 0.0, GAMMA_TAU), 10.0)
    return SweepGrid(template, ("phase", np.linspace(0.0, 4.0 * math.pi, 161)), dt=0.05)


FIGURES = {
    2: FigureSpec(2, _kappa_series(2, math.pi / 2, 6.0)),
    3: FigureSpec(3, _kappa_series(3, 0.0, 10.0)),
    4: FigureSpec(
        4,
        {
            "kappa0.5": Scenario(
                "fig4_kappa0.5", "one_excited", SystemParams(0.5, 0.0, GAMMA_TAU), 10.0, ("concurrence", "rho_aa")
            )
        },
    ),
    5: FigureSpec(5, sweep=_phase_sweep("one_excited")),
    6: FigureSpec(
        6,
        {
            "kappa0.5": Scenario(
                "fig6_kappa0.5",
                "both_excited",
                SystemParams(0.5, 0.0, GAMMA_TAU),
                10.0,
                ("concurrence", "rho_ee", "rho_aa"),
            )
        },
    ),
    7: FigureSpec(7, sweep=_phase_sweep("both_excited")),
}
