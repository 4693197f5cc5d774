"""Command-line interface.

Subcommands: ``evolve``, ``events``, ``figure`` and ``kappa``. Exit status
is 0 on success, 2 for usage errors and 3 when numerical integration fails.
"""

from __future__ import annotations

import argparse
import ast
import csv
import json
import math
import operator
import re
import sys
from contextlib import contextmanager
from dataclasses import dataclass, fields
from pathlib import Path

import numpy as np

from .closed_form import evolve_closed_form
from .entanglement import concurrence_x, detect_events, signed_concurrence_x
from .geometry import kappa_from_cone
from .numeric import IntegrationError, IntegratorConfig, integrate
from .params import SystemParams
from .scenarios import FIGURES, run_scenario, run_sweep, sample_times
from .states import StateError, Trajectory, XState, both_excited_initial, one_excited_initial

EVOLVE_COLUMNS = ["t", "rho_ee", "rho_ss", "rho_aa", "re_rho_as", "im_rho_as", "rho_gg", "concurrence"]

EXIT_USAGE = 2
EXIT_NUMERIC = 3


class UsageError(ValueError):
    pass


_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.USub: operator.neg,
    ast.UAdd: operator.pos,
}


def parse_angle(text) -> float:
    """Parse radians given as a number or an expression in ``pi`` such as ``3pi/2``."""
    if isinstance(text, (int, float)) and not isinstance(text, bool):
        return float(text)
    expr = re.sub(r"(\d)\s*(pi)\b", r"\1*\2", str(text).strip().replace("π", "pi"))

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.operand))
        raise UsageError(f"cannot parse angle {text!r}")

    try:
        value = ev(ast.parse(expr, mode="eval"))
    except (SyntaxError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse angle {text!r}") from exc
    if not math.isfinite(value):
        raise UsageError(f"angle {text!r} is not finite")
    return value


def _complex(value) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def parse_initial(spec) -> XState:
    """``one``, ``one2`` (atom 2 excited), ``both`` or ``custom:<json>`` (or a dict)."""
    if isinstance(spec, str):
        if spec == "one":
            return one_excited_initial(1)
        if spec == "one2":
            return one_excited_initial(2)
        if spec == "both":
            return both_excited_initial()
        if not spec.startswith("custom:"):
            raise UsageError(f"unknown initial state {spec!r}")
        try:
            spec = json.loads(spec[len("custom:"):])
        except json.JSONDecodeError as exc:
            raise UsageError(f"bad custom initial state: {exc}") from exc
    if not isinstance(spec, dict):
        raise UsageError("custom initial state must be a JSON object")
    allowed = {f.name for f in fields(XState)}
    unknown = set(spec) - allowed
    if unknown:
        raise UsageError(f"unknown initial-state keys {sorted(unknown)}")
    try:
        vals = {
            "rho_ee": float(spec.get("rho_ee", 0.0)),
            "rho_ss": float(spec.get("rho_ss", 0.0)),
            "rho_aa": float(spec.get("rho_aa", 0.0)),
            "rho_as": _complex(spec.get("rho_as", 0.0)),
            "rho_eg": _complex(spec.get("rho_eg", 0.0)),
        }
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad custom initial state: {exc}") from exc
    vals["rho_gg"] = float(spec.get("rho_gg", 1.0 - vals["rho_ee"] - vals["rho_ss"] - vals["rho_aa"]))
    x = XState(**vals)
    try:
        x.check()
    except StateError as exc:
        raise UsageError(f"invalid initial state: {exc}") from exc
    return x


@dataclass
class RunConfig:
    kappa: float | None = None
    phase: float = 0.0
    gamma_tau: float = 0.4
    initial: object = "one"
    t_max: float = 10.0
    dt: float = 0.01
    method: str = "closed"
    out: str = "-"

    @classmethod
    def from_file(cls, path: str) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config must be a JSON object")
        unknown = set(data) - {f.name for f in fields(cls)}
        if unknown:
            raise UsageError(f"unknown config keys {sorted(unknown)}")
        return cls(**data)

    def resolve(self) -> tuple[SystemParams, XState]:
        if self.kappa is None:
            raise UsageError("kappa is required (flag --kappa or config key)")
        if self.method not in ("closed", "rk4", "both"):
            raise UsageError(f"unknown method {self.method!r}")
        if not self.dt > 0 or not self.t_max > 0:
            raise UsageError("dt and t_max must be positive")
        try:
            params = SystemParams(float(self.kappa), parse_angle(self.phase), float(self.gamma_tau))
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        return params, parse_initial(self.initial)


def _add_physics_flags(p: argparse.ArgumentParser) -> None:
    # defaults are None so that only flags actually given override --config
    p.add_argument("--config", help="JSON file with RunConfig keys")
    p.add_argument("--kappa", type=float)
    p.add_argument("--phase", help="omega_0*tau in radians; accepts pi expressions like pi/2")
    p.add_argument("--gamma-tau", dest="gamma_tau", type=float)
    p.add_argument("--initial", help="one | one2 | both | custom:<json>")
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--dt", type=float, help="output sampling interval")
    p.add_argument("--method", choices=["closed", "rk4", "both"])
    p.add_argument("--out", help="output path, '-' for stdout")
    p.add_argument("--basis", choices=["bare", "collective"], default="bare", help="RK4 encoding")
    p.add_argument("--step", type=float, default=1e-3, help="RK4 step")


def _run_config(args) -> RunConfig:
    cfg = RunConfig.from_file(args.config) if args.config else RunConfig()
    for f in fields(RunConfig):
        value = getattr(args, f.name, None)
        if value is not None:
            setattr(cfg, f.name, value)
    return cfg


def fmt(x: float, golden: bool = False) -> str:
    """Shortest round-trip repr, or 6 significant digits for golden files."""
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return f"{x:.6g}" if golden else repr(x)


@contextmanager
def _open_out(path: str):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def write_csv(fh, header, rows, golden=False) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v, golden) for v in row])


def _trajectory_columns(traj: Trajectory, names) -> np.ndarray:
    return np.column_stack([traj.t] + [traj.element(n) for n in names])


def _rk4_trajectory(params, init, cfg, t, args) -> Trajectory:
    config = IntegratorConfig(step=args.step, t_max=float(t[-1]))
    traj = integrate(params, init, config, basis=args.basis, t_eval=t)
    traj.concurrence = concurrence_x(traj.states)
    return traj


def cmd_evolve(args) -> int:
    cfg = _run_config(args)
    params, init = cfg.resolve()
    t = _sample(cfg)
    closed = evolve_closed_form(params, init, t)
    closed_traj = Trajectory(t, closed, concurrence_x(closed))
    header = list(EVOLVE_COLUMNS)
    if cfg.method == "closed":
        table = _trajectory_columns(closed_traj, EVOLVE_COLUMNS[1:])
    else:
        rk4 = _rk4_trajectory(params, init, cfg, t, args)
        table = _trajectory_columns(rk4 if cfg.method == "rk4" else closed_traj, EVOLVE_COLUMNS[1:])
        if cfg.method == "both":
            residual = np.abs(rk4.states.as_array() - closed.as_array()).max(axis=-1)
            table = np.column_stack([table, residual])
            header.append("residual")
    with _open_out(cfg.out) as fh:
        write_csv(fh, header, table, golden=args.golden)
    return 0


def _sample(cfg: RunConfig) -> np.ndarray:
    try:
        return sample_times(cfg.t_max, cfg.dt)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def cmd_events(args) -> int:
    cfg = _run_config(args)
    params, init = cfg.resolve()
    t = _sample(cfg)
    if cfg.method == "rk4":
        traj = _rk4_trajectory(params, init, cfg, t, args)
        signed = signed_concurrence_x(traj.states)
        func = lambda s: max(float(np.interp(s, t, signed)), 0.0)  # noqa: E731
    else:
        closed = evolve_closed_form(params, init, t)
        traj = Trajectory(t, closed, concurrence_x(closed))
        func = lambda s: concurrence_x(evolve_closed_form(params, init, s))  # noqa: E731
    events = detect_events(traj, zero_tol=args.zero_tol, func=func)
    text = json.dumps(events.as_dict(6))
    with _open_out(cfg.out) as fh:
        fh.write(text + "\n")
    return 0


def cmd_figure(args) -> int:
    if args.number not in FIGURES:
        raise UsageError(f"unknown figure {args.number}; choose from {sorted(FIGURES)}")
    spec = FIGURES[args.number]
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for label, scenario in spec.curves.items():
        traj = run_scenario(scenario, dt_sample=args.dt, check_numeric=not args.no_check)
        path = outdir / f"fig{spec.number}_{label}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            write_csv(fh, ["t", *scenario.outputs], _trajectory_columns(traj, scenario.outputs), args.golden)
        written.append(path)
    if spec.sweep is not None:
        table = run_sweep(spec.sweep)
        path = outdir / f"fig{spec.number}_{spec.sweep_label}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            write_csv(fh, spec.sweep.columns, table, args.golden)
        written.append(path)
    for path in written:
        print(path)
    return 0


def cmd_kappa(args) -> int:
    try:
        value = kappa_from_cone(parse_angle(args.half_angle), parse_angle(args.tilt))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"{value:.12g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twoatom", description="Entanglement dynamics of two distant atoms coupled through a lens."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("evolve", help="X-state elements and concurrence versus time (CSV)")
    _add_physics_flags(p)
    p.add_argument("--golden", action="store_true", help="6 significant digits")
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("events", help="entanglement birth/death times and peak (JSON)")
    _add_physics_flags(p)
    p.add_argument("--zero-tol", dest="zero_tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_events)

    p = sub.add_parser("figure", help="write the CSV data behind a figure preset")
    p.add_argument("number", type=int)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--golden", action="store_true", help="6 significant digits")
    p.add_argument("--no-check", action="store_true", help="skip the RK4 cross-check")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("kappa", help="coupling fraction of a collection cone")
    p.add_argument("--half-angle", dest="half_angle", required=True)
    p.add_argument("--tilt", default="0")
    p.set_defaults(func=cmd_kappa)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IntegrationError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
