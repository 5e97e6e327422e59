"""Power, heat currents and figures of merit.

Sign convention: currents are positive when energy flows into the system.
An engine therefore has P < 0, Q_h > 0 and Q_c < 0.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import PreconditionViolated, RegimeMismatch
from .model import MaserParams, bare_hamiltonian, derive_bath_occupations, generator_rhs
from .steady_state import denominator_F

ENGINE = "engine"
REFRIGERATOR = "refrigerator"
OTHER = "other"

SIGN_ATOL = 1e-14


@dataclass
class ThermoCurrents:
    power: float
    q_hot_inc: float
    q_hot_coh: float
    q_cold: float
    regime: str = OTHER

    @property
    def q_hot(self) -> float:
        return self.q_hot_inc + self.q_hot_coh

    @property
    def first_law_residual(self) -> float:
        return self.power + self.q_hot + self.q_cold


def power(params: MaserParams, rho) -> float:
    w = (params.omega1, params.omega2, params.omega3)
    return float(2 * params.lambda_drive * sum((w[j - 1] - w[0]) * rho[1, j].imag for j in (2, 3)))


def hot_heat(params: MaserParams, rho):
    """Return ``(q_inc, q_coh)`` for the hot bath."""
    n3 = derive_bath_occupations(params).n_h3
    n = {2: params.n_h2, 3: n3}
    w = {2: params.omega2, 3: params.omega3}
    g = params.gamma_h
    q_inc = 2 * g * sum(w[j] * (n[j] * rho[0, 0].real - (1 + n[j]) * rho[j, j].real) for j in (2, 3))
    q_coh = -2 * g * ((1 + n[2]) * w[3] + (1 + n[3]) * w[2]) * params.p * rho[2, 3].real
    return float(q_inc), float(q_coh)


def cold_heat(params: MaserParams, rho) -> float:
    return float(
        2 * params.omega1 * params.gamma_c * (params.n_c * rho[0, 0].real - (1 + params.n_c) * rho[1, 1].real)
    )


def energy_flux(params: MaserParams, rho) -> float:
    """d<H0>/dt under the rotating-frame generator."""
    return float(np.trace(generator_rhs(params, rho) @ bare_hamiltonian(params)).real)


def classify_regime(currents: ThermoCurrents) -> str:
    def sign(x):
        return 0 if abs(x) <= SIGN_ATOL else (1 if x > 0 else -1)

    s = (sign(currents.q_hot), sign(currents.q_cold), sign(currents.power))
    if s == (1, -1, -1):
        return ENGINE
    if s == (-1, 1, 1):
        return REFRIGERATOR
    return OTHER


def currents(params: MaserParams, rho) -> ThermoCurrents:
    q_inc, q_coh = hot_heat(params, rho)
    out = ThermoCurrents(power=power(params, rho), q_hot_inc=q_inc, q_hot_coh=q_coh, q_cold=cold_heat(params, rho))
    out.regime = classify_regime(out)
    return out


def analytic_currents(params: MaserParams) -> ThermoCurrents:
    """Closed-form steady-state currents at delta = 0 with resonant drive.

    Each current carries the prefactor 4 lambda^2 gamma_c xi_h / F obtained by
    inserting the closed-form coherences into the current expressions above.
    """
    if params.delta != 0 or not params.degenerate_resonant:
        raise PreconditionViolated("closed-form currents need delta == 0 and resonant drive")
    nh, nc, p = params.n_h2, params.n_c, params.p
    gc, lam = params.gamma_c, params.lambda_drive
    xi_h = params.gamma_h * (1 + nh)
    F = denominator_F(nh, nc, params.gamma_h, gc, lam, p)
    base = 4 * lam**2 * gc * xi_h * (nh - nc) / F
    out = ThermoCurrents(
        power=-base * (params.omega2 - params.omega1) * (1 + p),
        q_hot_inc=base * params.omega2,
        q_hot_coh=base * params.omega2 * p,
        q_cold=-base * params.omega1 * (1 + p),
    )
    out.regime = classify_regime(out)
    return out


def efficiency(currents: ThermoCurrents) -> float:
    if currents.regime != ENGINE:
        raise RegimeMismatch(f"efficiency is defined only for an engine, got {currents.regime}")
    return -currents.power / currents.q_hot


def cop(currents: ThermoCurrents) -> float:
    if currents.regime != REFRIGERATOR:
        raise RegimeMismatch(f"COP is defined only for a refrigerator, got {currents.regime}")
    return currents.q_cold / currents.power


def carnot_efficiency(params: MaserParams) -> float:
    baths = derive_bath_occupations(params)
    if baths.T_h == 0:
        return float("nan")
    return 1 - baths.T_c / baths.T_h


def efficiency_and_cop(currents: ThermoCurrents, params: MaserParams):
    """Return ``(eta, chi, eta_carnot)``; eta/chi are None outside their regime."""
    eta: Optional[float] = efficiency(currents) if currents.regime == ENGINE else None
    chi: Optional[float] = cop(currents) if currents.regime == REFRIGERATOR else None
    return eta, chi, carnot_efficiency(params)
