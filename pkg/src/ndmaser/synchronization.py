"""Phase-space synchronization measure of the steady state.

The quasi-probability deviation on the (phi21, phi31) torus is

    S(phi21, phi31) = [Re(r12 e^{i phi21}) + Re(r13 e^{i phi31})
                       + Re(r23 e^{i(phi21 - phi31)})] / (16 pi^2)

and S_max is its maximum. Grids are uniform on [-pi, pi) so that the
first grid point is (-pi, -pi).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from .errors import PreconditionViolated
from .model import MaserParams

NORM = 1.0 / (16 * math.pi**2)

COOPERATIVE = "cooperative"
ENTRAINMENT = "entrainment_dominant"
MUTUAL = "mutual_coupling_dominant"

TIE_RTOL = 1e-12


@dataclass
class PhaseDistribution:
    grid_size: int
    phases: np.ndarray  # 1-D grid shared by both axes
    values: np.ndarray  # values[i, j] = S(phases[i], phases[j]) with i -> phi21

    def argmax(self) -> Tuple[float, float]:
        i, j = _tiebreak_index(self.values)
        return float(self.phases[i]), float(self.phases[j])

    def argmin(self) -> Tuple[float, float]:
        i, j = _tiebreak_index(-self.values)
        return float(self.phases[i]), float(self.phases[j])

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write("phi21,phi31,S\n")
            for i, a in enumerate(self.phases):
                for j, b in enumerate(self.phases):
                    fh.write(f"{a:.12g},{b:.12g},{self.values[i, j]:.12g}\n")


@dataclass
class SyncResult:
    k: float
    s_max_numeric: float
    argmax_phases: Tuple[float, float]
    branch: str
    s_max_closed: Optional[float] = None

    @property
    def s_max(self) -> float:
        return self.s_max_numeric


def dissipation_to_driving_ratio(params: MaserParams) -> float:
    """k = gamma_h (1 + n_h2) (1 + p) / lambda."""
    if params.lambda_drive == 0:
        raise ZeroDivisionError("k is undefined without drive (lambda = 0)")
    return params.gamma_h * (1 + params.n_h2) * (1 + params.p) / params.lambda_drive


def _coherences(rho):
    rho = np.asarray(rho)
    return rho[1, 2], rho[1, 3], rho[2, 3]


def torus_grid(grid_size: int) -> np.ndarray:
    return -math.pi + 2 * math.pi * np.arange(grid_size) / grid_size


def _evaluate(rho, x, y):
    r12, r13, r23 = _coherences(rho)
    return NORM * (
        np.real(r12 * np.exp(1j * x)) + np.real(r13 * np.exp(1j * y)) + np.real(r23 * np.exp(1j * (x - y)))
    )


def phase_distribution(rho_ss, grid_size: int = 256) -> PhaseDistribution:
    if grid_size < 16:
        raise ValueError("grid_size must be at least 16")
    phases = torus_grid(grid_size)
    X, Y = np.meshgrid(phases, phases, indexing="ij")
    return PhaseDistribution(grid_size=grid_size, phases=phases, values=_evaluate(rho_ss, X, Y))


def _tiebreak_index(values):
    """Row-major first index among entries within TIE_RTOL of the maximum."""
    top = values.max()
    scale = np.abs(values).max()
    hits = np.argwhere(values >= top - TIE_RTOL * scale)
    i, j = hits[0]
    return int(i), int(j)


def _wrap(phi):
    return (phi + math.pi) % (2 * math.pi) - math.pi


def smax_numeric(rho_ss, grid_size: int = 256) -> Tuple[float, Tuple[float, float]]:
    """Maximise S over the torus: grid scan, then trust-region Newton polish."""
    dist = phase_distribution(rho_ss, grid_size)
    r12, r13, r23 = _coherences(rho_ss)
    scale = max(abs(r12), abs(r13), abs(r23))
    if scale == 0:
        return 0.0, dist.argmax()
    a12, a13, a23 = r12 / scale, r13 / scale, r23 / scale

    # work with -S * 16 pi^2 / scale, which has O(1) coefficients
    def f(z):
        x, y = z
        return -(np.real(a12 * np.exp(1j * x)) + np.real(a13 * np.exp(1j * y)) + np.real(a23 * np.exp(1j * (x - y))))

    def grad(z):
        x, y = z
        e12, e13, e23 = 1j * a12 * np.exp(1j * x), 1j * a13 * np.exp(1j * y), 1j * a23 * np.exp(1j * (x - y))
        return -np.array([np.real(e12) + np.real(e23), np.real(e13) - np.real(e23)])

    def hess(z):
        x, y = z
        h12 = -np.real(a12 * np.exp(1j * x))
        h13 = -np.real(a13 * np.exp(1j * y))
        h23 = -np.real(a23 * np.exp(1j * (x - y)))
        return -np.array([[h12 + h23, -h23], [-h23, h13 + h23]])

    x0 = np.array(dist.argmax())
    res = minimize(f, x0, jac=grad, hess=hess, method="trust-exact", options={"gtol": 1e-13})
    best = x0
    if res.fun <= f(x0):
        best = res.x
    value = -f(best) * scale * NORM
    grid_value = float(dist.values.max())
    if value < grid_value:
        value, best = grid_value, x0
    return float(value), (float(_wrap(best[0])), float(_wrap(best[1])))


def regime_of(params: MaserParams) -> str:
    """Operating side decided by the bath occupations (refrigerator iff n_h2 <= n_c)."""
    return "refrigerator" if params.n_h2 <= params.n_c else "engine"


def branch_of(regime: str, k: float) -> str:
    if regime == "refrigerator":
        return COOPERATIVE
    return ENTRAINMENT if k > 2 else MUTUAL


def smax_closed_form(rho_ss, k: float, regime: str) -> float:
    """Closed-form S_max valid for the degenerate resonant steady state."""
    r12, r13, r23 = _coherences(rho_ss)
    if abs(r12 - r13) > 1e-8 * max(abs(r12), 1e-300) + 1e-15:
        raise PreconditionViolated("closed form needs rho12 == rho13 (delta = 0, resonant)")
    a12, a13, a23 = abs(r12), abs(r13), abs(r23)
    if regime == "refrigerator":
        return NORM * (a12 + a13 + a23)
    if regime != "engine":
        raise ValueError(f"unknown regime {regime!r}")
    if k > 2:
        return NORM * (a12 + a13 - a23)
    return NORM * (1 + k**2 / 2) * a23


def synchronization(params: MaserParams, rho_ss, grid_size: int = 256) -> SyncResult:
    """Full synchronization summary for a steady state of ``params``."""
    k = dissipation_to_driving_ratio(params)
    regime = regime_of(params)
    s_num, arg = smax_numeric(rho_ss, grid_size)
    s_closed = None
    if params.degenerate_resonant:
        s_closed = smax_closed_form(rho_ss, k, regime)
    return SyncResult(k=k, s_max_numeric=s_num, argmax_phases=arg, branch=branch_of(regime, k), s_max_closed=s_closed)
