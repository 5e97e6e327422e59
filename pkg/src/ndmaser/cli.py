"""Command-line entry point: ``ndmaser {steady,sweep,phase-dist,bounds,figure}``."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .bounds import bound_report
from .errors import ConfigError, MaserError
from .model import MaserParams
from .steady_state import solve_steady_state
from .sweeps import FIGURES, SOLVERS, SweepConfig, emit, reproduce_figure, run_sweep
from .synchronization import phase_distribution, synchronization
from .thermodynamics import currents, efficiency_and_cop


def _load_json(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc


def _load_params(path) -> MaserParams:
    if path is None:
        return MaserParams()
    data = _load_json(path)
    data = data.get("base", data)
    try:
        return MaserParams.from_dict(data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def _complex_matrix(rho):
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(rho)]


def _write(text: str, out):
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc


def cmd_steady(args):
    params = _load_params(args.config)
    sol = solve_steady_state(params, args.solver)
    cur = currents(params, sol.rho_ss)
    eta, chi, eta_c = efficiency_and_cop(cur, params)
    sync = synchronization(params, sol.rho_ss, args.grid)
    out = {
        "params": params.to_dict(),
        "method": sol.method,
        "residual": sol.residual,
        "rho": _complex_matrix(sol.rho_ss),
        "P": cur.power,
        "Qh_inc": cur.q_hot_inc,
        "Qh_coh": cur.q_hot_coh,
        "Qc": cur.q_cold,
        "regime": cur.regime,
        "eta": eta,
        "chi": chi,
        "eta_carnot": eta_c,
        "k": sync.k,
        "Smax": sync.s_max_numeric,
        "Smax_closed": sync.s_max_closed,
        "argmax": list(sync.argmax_phases),
        "branch": sync.branch,
    }
    _write(json.dumps(out, indent=2) + "\n", args.out)


def cmd_bounds(args):
    params = _load_params(args.config)
    sol = solve_steady_state(params, args.solver)
    cur = currents(params, sol.rho_ss)
    sync = synchronization(params, sol.rho_ss, args.grid)
    rep = bound_report(cur, sync, params)
    out = dict(vars(rep), regime=cur.regime, Smax=sync.s_max)
    _write(json.dumps(out, indent=2) + "\n", args.out)


def cmd_phase_dist(args):
    params = _load_params(args.config)
    sol = solve_steady_state(params, args.solver)
    dist = phase_distribution(sol.rho_ss, args.grid)
    if args.out is None:
        raise ConfigError("phase-dist needs --out")
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    dist.to_csv(args.out)


def cmd_sweep(args):
    if args.config is None:
        raise ConfigError("sweep needs --config")
    data = _load_json(args.config)
    if args.solver != "auto":
        data["solver"] = args.solver
    config = SweepConfig.from_dict(data)
    rows = run_sweep(config, workers=args.workers)
    if args.out is None:
        from .sweeps import to_csv, to_json

        sys.stdout.write(to_csv(rows, config.outputs) if args.format == "csv" else to_json(rows, config.outputs))
    else:
        emit(rows, args.format, args.out, config.outputs)


def cmd_figure(args):
    out = args.out or "figures"
    for path in reproduce_figure(args.fig_id, out, points=args.points, grid=args.grid, workers=args.workers):
        print(path)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ndmaser", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, grid=256):
        p.add_argument("--config", type=str, default=None, help="JSON parameter/sweep file")
        p.add_argument("--out", type=str, default=None, help="output path (stdout if omitted)")
        p.add_argument("--grid", type=int, default=grid, help="phase grid points per axis")
        p.add_argument("--solver", choices=SOLVERS, default="auto")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--workers", type=int, default=1)
        return p

    common(sub.add_parser("steady", help="steady state and observables")).set_defaults(func=cmd_steady)
    common(sub.add_parser("sweep", help="config-driven parameter sweep")).set_defaults(func=cmd_sweep)
    common(sub.add_parser("phase-dist", help="export the phase distribution grid")).set_defaults(func=cmd_phase_dist)
    common(sub.add_parser("bounds", help="single-point bound report")).set_defaults(func=cmd_bounds)
    fig = common(sub.add_parser("figure", help="reproduce the data of a figure panel"))
    fig.add_argument("fig_id", choices=FIGURES)
    fig.add_argument("--points", type=int, default=50)
    fig.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except MaserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
