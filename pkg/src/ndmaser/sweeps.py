"""Parameter sweeps, figure-data reproduction and CSV/JSON output."""
from __future__ import annotations

import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from .bounds import bound_report, format_summary, summary_table
from .errors import ConfigError, MaserError
from .model import MaserParams, derive_bath_occupations
from .steady_state import solve_steady_state
from .synchronization import dissipation_to_driving_ratio, phase_distribution, smax_numeric
from .thermodynamics import ENGINE, REFRIGERATOR, currents, efficiency_and_cop

AXES = ("nh2_over_nc", "p", "delta", "lambda")
SOLVERS = ("auto", "analytic", "nullspace", "evolve")

# fixed output order; the sweep value column comes first under the axis name
COLUMNS = (
    "k", "P", "Qh_inc", "Qh_coh", "Qc", "Smax", "ratio_ps", "ratio_qs",
    "eta", "eta_S", "chi", "chi_S", "regime", "residual", "method", "error",
)
NA = "NA"


@dataclass
class SweepConfig:
    base: MaserParams
    sweep_axis: str
    start: float
    stop: float
    points: int = 50
    solver: str = "auto"
    outputs: List[str] = field(default_factory=lambda: list(COLUMNS))

    def __post_init__(self):
        if self.sweep_axis not in AXES:
            raise ConfigError(f"unknown sweep axis {self.sweep_axis!r}; choose from {AXES}")
        if self.points < 2:
            raise ConfigError("a sweep needs at least 2 points")
        if not self.start < self.stop:
            raise ConfigError("sweep needs from < to")
        if self.solver not in SOLVERS:
            raise ConfigError(f"unknown solver {self.solver!r}")
        unknown = [name for name in self.outputs if name not in COLUMNS]
        if unknown:
            raise ConfigError(f"unknown outputs {unknown}")
        if self.solver == "analytic" and (self.sweep_axis == "delta" or not self.base.degenerate_resonant):
            raise ConfigError("analytic solver needs delta = 0 and a resonant drive at every point")
        try:
            for value in (self.start, self.stop):
                apply_axis(self.base, self.sweep_axis, value)
        except ValueError as exc:
            raise ConfigError(f"sweep range leaves the valid parameter domain: {exc}") from exc

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        try:
            base = MaserParams.from_dict(data.get("base", {}))
            return cls(
                base=base,
                sweep_axis=data["sweep_axis"],
                start=float(data["from"]),
                stop=float(data["to"]),
                points=int(data.get("points", 50)),
                solver=data.get("solver", "auto"),
                outputs=list(data.get("outputs", COLUMNS)),
            )
        except KeyError as exc:
            raise ConfigError(f"missing config field {exc}") from exc
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc


def apply_axis(base: MaserParams, axis: str, value: float) -> MaserParams:
    if axis == "nh2_over_nc":
        return base.with_(n_h2=value * base.n_c)
    if axis == "p":
        return base.with_(p=value)
    if axis == "delta":
        return base.with_(delta=value)
    if axis == "lambda":
        return base.with_(lambda_drive=value)
    raise ConfigError(f"unknown sweep axis {axis!r}")


@dataclass
class SweepRow:
    axis: str
    value: float
    params: MaserParams
    k: Optional[float] = None
    P: Optional[float] = None
    Qh_inc: Optional[float] = None
    Qh_coh: Optional[float] = None
    Qc: Optional[float] = None
    Smax: Optional[float] = None
    ratio_ps: Optional[float] = None
    ratio_qs: Optional[float] = None
    eta: Optional[float] = None
    eta_S: Optional[float] = None
    chi: Optional[float] = None
    chi_S: Optional[float] = None
    regime: Optional[str] = None
    residual: Optional[float] = None
    method: Optional[str] = None
    error: Optional[str] = None
    eta_carnot: Optional[float] = None

    @property
    def ratio_es(self) -> Optional[float]:
        if self.eta_S is None or self.eta is None:
            return None
        return self.eta_S / self.eta

    @property
    def ratio_cop(self) -> Optional[float]:
        if self.chi_S is None or self.chi is None:
            return None
        return self.chi_S / self.chi

    def record(self) -> dict:
        out = {self.axis: self.value}
        for name in COLUMNS:
            out[name] = getattr(self, name)
        return out


def resolve_solver(params: MaserParams, solver: str) -> str:
    if solver == "auto":
        return "analytic" if params.degenerate_resonant and abs(params.p) < 1 else "nullspace"
    return solver


def evaluate_point(params: MaserParams, solver: str = "auto", axis: str = "point", value: float = math.nan) -> SweepRow:
    """Steady state plus every observable at one parameter point.

    Solver failures are captured in the ``error`` field rather than raised.
    """
    row = SweepRow(axis=axis, value=float(value), params=params)
    row.method = resolve_solver(params, solver)
    try:
        row.k = dissipation_to_driving_ratio(params)
    except ZeroDivisionError:
        row.k = None
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            sol = solve_steady_state(params, row.method)
    except (MaserError, np.linalg.LinAlgError) as exc:
        row.error = f"{type(exc).__name__}: {exc}"
        return row
    rho = sol.rho_ss
    row.residual = sol.residual
    cur = currents(params, rho)
    row.P, row.Qh_inc, row.Qh_coh, row.Qc = cur.power, cur.q_hot_inc, cur.q_hot_coh, cur.q_cold
    row.regime = cur.regime
    row.Smax, _ = smax_numeric(rho)
    row.eta, row.chi, row.eta_carnot = efficiency_and_cop(cur, params)
    rep = bound_report(cur, row.Smax, params)
    row.ratio_ps, row.ratio_qs = rep.ratio_ps, rep.ratio_qs
    row.eta_S, row.chi_S = rep.eta_s, rep.chi_s
    return row


def _evaluate_args(args):
    return evaluate_point(*args)


def run_sweep(config: SweepConfig, workers: int = 1) -> List[SweepRow]:
    """Evaluate every sweep point; rows come back sorted by sweep value."""
    jobs = [
        (apply_axis(config.base, config.sweep_axis, v), config.solver, config.sweep_axis, float(v))
        for v in config.values()
    ]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_evaluate_args, jobs))
    else:
        rows = [_evaluate_args(job) for job in jobs]
    rows.sort(key=lambda r: r.value)
    return rows


def _fmt(x) -> str:
    if x is None:
        return NA
    if isinstance(x, str):
        return x.replace(",", ";")
    if isinstance(x, (float, int, np.floating)) and not math.isfinite(x):
        return NA
    return f"{x:.12g}"


def _columns(outputs):
    return [name for name in COLUMNS if name in outputs]


def to_csv(rows, outputs=COLUMNS) -> str:
    if not rows:
        raise ValueError("nothing to emit")
    cols = _columns(outputs)
    lines = [",".join([rows[0].axis] + cols)]
    for row in rows:
        rec = row.record()
        lines.append(",".join(_fmt(rec[c]) for c in [row.axis] + cols))
    return "\n".join(lines) + "\n"


def to_json(rows, outputs=COLUMNS) -> str:
    if not rows:
        raise ValueError("nothing to emit")
    cols = [rows[0].axis] + _columns(outputs)

    def clean(x):
        if isinstance(x, float) and not math.isfinite(x):
            return None
        return x

    payload = [{c: clean(row.record()[c]) for c in cols} for row in rows]
    return json.dumps(payload, indent=1) + "\n"


def emit(rows, fmt: str, destination, outputs=COLUMNS) -> Path:
    if fmt == "csv":
        text = to_csv(rows, outputs)
    elif fmt == "json":
        text = to_json(rows, outputs)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    path = Path(destination)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc}") from exc
    return path


def power_sign_changes(rows) -> List[float]:
    """Sweep values where P changes sign.

    Points with vanishing power are skipped, so a crossing that lands on a
    grid point is reported midway between its nonzero neighbours.
    """
    powers = [r.P for r in rows if r.P is not None]
    scale = max((abs(x) for x in powers), default=0.0)
    signed = [(r.value, r.P) for r in rows if r.P is not None and abs(r.P) > 1e-12 * scale]
    return [(va + vb) / 2 for (va, pa), (vb, pb) in zip(signed, signed[1:]) if pa * pb < 0]

# ---------------------------------------------------------------- figures

DEFAULT_BASE = MaserParams()  # omega2 = 3, delta = 0.05, gamma = 0.1, lambda = 0.05, n_c = 0.1

PHASE_PANELS = {
    "fig2a": dict(ratio=5.0, p=0.5),
    "fig2b": dict(ratio=5.0, p=-0.99),
    "fig2c": dict(ratio=0.5, p=0.5),
    "fig2d": dict(ratio=0.5, p=-0.99),
}

# panel -> (axis, range, observable, [(label, overrides)])
SWEEP_PANELS = {
    "fig3a": ("nh2_over_nc", (0.2, 5.0), "ratio_ps",
              [("delta0.05", dict(p=0.5, delta=0.05)), ("delta0.2", dict(p=0.5, delta=0.2))]),
    "fig3b": ("p", (-0.99, 0.99), "ratio_ps",
              [("engine", dict(n_h2=0.5)), ("refrigerator", dict(n_h2=0.05))]),
    "fig4a": ("nh2_over_nc", (0.2, 5.0), "ratio_qs",
              [("p0.5", dict(p=0.5)), ("p-0.99", dict(p=-0.99))]),
    "fig4b": ("p", (-0.99, 0.99), "ratio_qs",
              [("engine", dict(n_h2=0.5)), ("refrigerator", dict(n_h2=0.05))]),
    "fig5a": ("nh2_over_nc", (0.2, 5.0), "ratio_es",
              [("delta0.05", dict(p=0.1, delta=0.05)), ("delta0.1", dict(p=0.1, delta=0.1))]),
    "fig5b": ("p", (-0.99, 0.99), "ratio_es",
              [("delta0.05", dict(n_h2=0.2, delta=0.05)), ("delta0.1", dict(n_h2=0.2, delta=0.1))]),
    "fig5c": ("nh2_over_nc", (0.2, 5.0), "ratio_cop",
              [("delta0.05", dict(p=0.1, delta=0.05)), ("delta0.1", dict(p=0.1, delta=0.1))]),
    "fig5d": ("p", (-0.99, 0.99), "ratio_cop",
              [("delta0.05", dict(n_h2=0.05, delta=0.05)), ("delta0.1", dict(n_h2=0.05, delta=0.1))]),
}

FIGURES = tuple(PHASE_PANELS) + tuple(SWEEP_PANELS)


def phase_panel_params(fig_id: str) -> MaserParams:
    panel = PHASE_PANELS[fig_id]
    return DEFAULT_BASE.with_(n_h2=panel["ratio"] * DEFAULT_BASE.n_c, p=panel["p"])


def panel_configs(fig_id: str, points: int = 50):
    """(label, SweepConfig) pairs for a sweep panel."""
    axis, (lo, hi), _, series = SWEEP_PANELS[fig_id]
    return [
        (label, SweepConfig(base=DEFAULT_BASE.with_(**over), sweep_axis=axis, start=lo, stop=hi, points=points))
        for label, over in series
    ]


def _diagnostics(rows):
    residuals = [r.residual for r in rows if r.residual is not None]
    return {
        "points": len(rows),
        "errors": sum(r.error is not None for r in rows),
        "max_residual": max(residuals) if residuals else None,
        "methods": sorted({r.method for r in rows if r.method}),
        "regimes": {reg: sum(r.regime == reg for r in rows) for reg in (ENGINE, REFRIGERATOR, "other")},
    }


def reproduce_figure(fig_id: str, out_dir, points: int = 50, grid: int = 256, workers: int = 1) -> List[Path]:
    """Write the CSV data and a JSON metadata sidecar for one figure panel."""
    if fig_id not in FIGURES:
        raise ValueError(f"unknown figure {fig_id!r}; choose from {FIGURES}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    meta = {"figure": fig_id}

    if fig_id in PHASE_PANELS:
        params = phase_panel_params(fig_id)
        sol = solve_steady_state(params)
        dist = phase_distribution(sol.rho_ss, grid)
        s_max, arg = smax_numeric(sol.rho_ss, grid)
        path = out_dir / f"{fig_id}.csv"
        dist.to_csv(path)
        written.append(path)
        meta.update(
            params=params.to_dict(),
            Omega_resolved=params.Omega,
            n_h3=derive_bath_occupations(params).n_h3,
            k=dissipation_to_driving_ratio(params),
            grid_size=grid,
            s_max=s_max,
            argmax_phases=list(arg),
            solver={"method": sol.method, "residual": sol.residual, "nullspace_dim": sol.nullspace_dim},
        )
    else:
        _, _, observable, _ = SWEEP_PANELS[fig_id]
        meta["observable"] = observable
        meta["series"] = []
        for label, config in panel_configs(fig_id, points):
            rows = run_sweep(config, workers=workers)
            path = emit(rows, "csv", out_dir / f"{fig_id}_{label}.csv")
            written.append(path)
            entry = {
                "label": label,
                "file": path.name,
                "axis": config.sweep_axis,
                "from": config.start,
                "to": config.stop,
                "base": config.base.to_dict(),
                "diagnostics": _diagnostics(rows),
            }
            if config.sweep_axis == "nh2_over_nc":
                entry["power_sign_change"] = power_sign_changes(rows)
            meta["series"].append(entry)

    sidecar = out_dir / f"{fig_id}.json"
    sidecar.write_text(json.dumps(meta, indent=2, default=str) + "\n")
    written.append(sidecar)
    return written


def default_summary_rows(delta: float, points: int = 50, workers: int = 1):
    """Rows feeding the bound summary: n_h2/n_c sweeps at p = 0.5 and p = 0.1."""
    rows = []
    for p in (0.5, 0.1):
        config = SweepConfig(
            base=DEFAULT_BASE.with_(delta=delta, p=p), sweep_axis="nh2_over_nc", start=0.2, stop=5.0, points=points
        )
        rows.extend(run_sweep(config, workers=workers))
    return rows


def summary_text(delta: float, points: int = 50, workers: int = 1) -> str:
    return format_summary(summary_table(default_summary_rows(delta, points, workers)))


__all__ = [
    "SweepConfig", "SweepRow", "apply_axis", "evaluate_point", "run_sweep", "emit", "to_csv", "to_json",
    "reproduce_figure", "FIGURES", "power_sign_changes", "default_summary_rows", "summary_text",
    "phase_panel_params", "panel_configs", "DEFAULT_BASE",
]
