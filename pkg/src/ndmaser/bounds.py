"""Synchronization bounds on power, coherent heat, efficiency and COP."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Optional, Tuple

from .errors import DegenerateSync, InsufficientData, RegimeMismatch, UndefinedForZeroP
from .model import MaserParams
from .thermodynamics import ENGINE, REFRIGERATOR, ThermoCurrents, cop, efficiency

SYNC_FLOOR = 1e-300
SATISFIED_RTOL = 1e-9


def kappa(params: MaserParams) -> float:
    """32 pi^2 lambda (omega3 - omega1)."""
    return 32 * math.pi**2 * params.lambda_drive * (params.omega3 - params.omega1)


def alpha(params: MaserParams) -> float:
    """(8 pi)^2 gamma_h omega3 (1 + n_h2) |p|."""
    return (8 * math.pi) ** 2 * params.gamma_h * params.omega3 * (1 + params.n_h2) * abs(params.p)


def _smax(sync) -> float:
    s = sync.s_max if hasattr(sync, "s_max") else float(sync)
    if s <= SYNC_FLOOR:
        raise DegenerateSync("S_max vanishes; bound ratio undefined")
    return s


def ps_bound(currents: ThermoCurrents, sync, params: MaserParams) -> Tuple[float, bool]:
    ratio = abs(currents.power) / (kappa(params) * _smax(sync))
    return ratio, ratio <= 1


def qs_bound(currents: ThermoCurrents, sync, params: MaserParams) -> Tuple[float, bool]:
    if params.p == 0:
        raise UndefinedForZeroP("coherent heat and alpha both vanish at p = 0")
    ratio = abs(currents.q_hot_coh) / (alpha(params) * _smax(sync))
    return ratio, ratio <= 1


def es_bound(currents: ThermoCurrents, sync, params: MaserParams) -> Tuple[float, float, bool]:
    """Return ``(eta_S, eta_S / eta, satisfied)`` for an engine."""
    if currents.regime != ENGINE:
        raise RegimeMismatch(f"E-S bound needs an engine, got {currents.regime}")
    s = _smax(sync)
    eta_s = kappa(params) * s / (currents.q_hot_inc + alpha(params) * s)
    ratio = eta_s / efficiency(currents)
    return eta_s, ratio, ratio <= 1 + SATISFIED_RTOL


def cop_bound(currents: ThermoCurrents, sync, params: MaserParams) -> Tuple[float, float, bool]:
    """Return ``(chi_S, chi_S / chi, satisfied)`` for a refrigerator."""
    if currents.regime != REFRIGERATOR:
        raise RegimeMismatch(f"COP bound needs a refrigerator, got {currents.regime}")
    chi_s = currents.q_cold / (kappa(params) * _smax(sync))
    ratio = chi_s / cop(currents)
    return chi_s, ratio, ratio <= 1 + SATISFIED_RTOL


@dataclass
class BoundReport:
    kappa: float
    alpha: float
    ratio_ps: Optional[float] = None
    ratio_qs: Optional[float] = None
    eta_s: Optional[float] = None
    ratio_es: Optional[float] = None
    chi_s: Optional[float] = None
    ratio_cop: Optional[float] = None
    flags: Dict[str, bool] = field(default_factory=dict)


def bound_report(currents: ThermoCurrents, sync, params: MaserParams) -> BoundReport:
    """Evaluate every bound that is defined for this point.

    Undefined ratios (S_max = 0, p = 0, wrong regime) are left as None and
    carry no flag.
    """
    rep = BoundReport(kappa=kappa(params), alpha=alpha(params))
    s = sync.s_max if hasattr(sync, "s_max") else float(sync)
    if s <= SYNC_FLOOR:
        return rep
    rep.ratio_ps, rep.flags["ps"] = ps_bound(currents, sync, params)
    if params.p != 0:
        rep.ratio_qs, rep.flags["qs"] = qs_bound(currents, sync, params)
    if currents.regime == ENGINE:
        rep.eta_s, rep.ratio_es, rep.flags["es"] = es_bound(currents, sync, params)
    elif currents.regime == REFRIGERATOR:
        rep.chi_s, rep.ratio_cop, rep.flags["cop"] = cop_bound(currents, sync, params)
    return rep


SUMMARY_ROWS = ("P-S", "Q-S", "E-S")


def summary_table(rows: Iterable) -> Dict[str, Dict[str, bool]]:
    """Tally bound satisfaction per regime from sweep rows.

    A cell is True when every classified point with a defined ratio satisfies
    the bound. The refrigerator E-S cell uses the COP bound.
    """
    tallies = {name: {ENGINE: [], REFRIGERATOR: []} for name in SUMMARY_ROWS}
    for row in rows:
        regime = row.regime
        if regime not in (ENGINE, REFRIGERATOR):
            continue
        if row.ratio_ps is not None:
            tallies["P-S"][regime].append(row.ratio_ps <= 1)
        if row.ratio_qs is not None:
            tallies["Q-S"][regime].append(row.ratio_qs <= 1)
        es = row.ratio_es if regime == ENGINE else row.ratio_cop
        if es is not None:
            tallies["E-S"][regime].append(es <= 1 + SATISFIED_RTOL)
    if not tallies["P-S"][ENGINE] or not tallies["P-S"][REFRIGERATOR]:
        raise InsufficientData("summary needs classified engine and refrigerator points")
    return {
        name: {regime: all(vals) for regime, vals in cells.items() if vals}
        for name, cells in tallies.items()
    }


def format_summary(table: Dict[str, Dict[str, bool]]) -> str:
    mark = {True: "ok", False: "x"}
    lines = [f"{'':6s}{'Engine':>8s}{'Refrigerator':>14s}"]
    for name, cells in table.items():
        e = mark.get(cells.get(ENGINE), "-")
        r = mark.get(cells.get(REFRIGERATOR), "-")
        lines.append(f"{name:6s}{e:>8s}{r:>14s}")
    return "\n".join(lines)
