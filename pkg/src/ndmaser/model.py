"""Four-level maser: parameters, Hamiltonians and the rotating-frame generator.

Basis order is (|0>, |1>, |2>, |3>). Energies are measured in units of the
cold transition frequency omega1. Superoperators act on column-major
vectorised density matrices, ``vec(rho) = rho.flatten(order="F")``, so that
``vec(A @ rho @ B) = kron(B.T, A) @ vec(rho)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Union

import numpy as np

RESONANT_MID = "resonant_mid"

DIM = 4
_EYE = np.eye(DIM, dtype=complex)


def ket_bra(i: int, j: int) -> np.ndarray:
    """Matrix unit |i><j|."""
    out = np.zeros((DIM, DIM), dtype=complex)
    out[i, j] = 1.0
    return out


@dataclass(frozen=True)
class MaserParams:
    """Physical parameters of the near-degenerate four-level maser.

    ``omega_drive`` is either a number or ``"resonant_mid"``, which places
    the drive halfway between the two transitions, ``omega2 - omega1 + delta/2``.
    """

    omega1: float = 1.0
    omega2: float = 3.0
    delta: float = 0.05
    omega_drive: Union[float, str] = RESONANT_MID
    lambda_drive: float = 0.05
    gamma_h: float = 0.1
    gamma_c: float = 0.1
    n_c: float = 0.1
    n_h2: float = 0.5
    p: float = 0.5

    def __post_init__(self):
        if not self.omega2 > self.omega1 > 0:
            raise ValueError("need omega2 > omega1 > 0")
        if self.delta < 0:
            raise ValueError("delta must be >= 0")
        if self.lambda_drive < 0:
            raise ValueError("lambda_drive must be >= 0")
        if self.gamma_h <= 0 or self.gamma_c <= 0:
            raise ValueError("gamma_h and gamma_c must be > 0")
        if self.n_c < 0 or self.n_h2 < 0:
            raise ValueError("bath occupations must be >= 0")
        if not -1.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [-1, 1]")
        if isinstance(self.omega_drive, str):
            if self.omega_drive != RESONANT_MID:
                raise ValueError(f"unknown drive sentinel {self.omega_drive!r}")
        elif not math.isfinite(self.omega_drive):
            raise ValueError("omega_drive must be finite")

    @property
    def omega3(self) -> float:
        return self.omega2 + self.delta

    @property
    def Omega(self) -> float:
        """Resolved drive frequency."""
        if self.omega_drive == RESONANT_MID:
            return self.omega2 - self.omega1 + self.delta / 2
        return float(self.omega_drive)

    @property
    def degenerate_resonant(self) -> bool:
        """True when delta == 0 and the drive sits exactly on omega2 - omega1."""
        return self.delta == 0 and abs(self.Omega - (self.omega2 - self.omega1)) <= 1e-12

    def with_(self, **changes) -> "MaserParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "omega1": self.omega1,
            "omega2": self.omega2,
            "delta": self.delta,
            "Omega": self.omega_drive,
            "lambda": self.lambda_drive,
            "gamma_h": self.gamma_h,
            "gamma_c": self.gamma_c,
            "n_c": self.n_c,
            "n_h2": self.n_h2,
            "p": self.p,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "MaserParams":
        """Inverse of :meth:`to_dict`; also accepts the dataclass field names."""
        aliases = {"Omega": "omega_drive", "lambda": "lambda_drive"}
        kwargs = {}
        for key, value in data.items():
            name = aliases.get(key, key)
            if name not in cls.__dataclass_fields__:
                raise ValueError(f"unknown parameter {key!r}")
            kwargs[name] = value if name == "omega_drive" and isinstance(value, str) else float(value)
        return cls(**kwargs)


@dataclass(frozen=True)
class BathOccupations:
    T_h: float
    T_c: float
    n_h3: float


def bose(omega: float, T: float) -> float:
    if T == 0:
        return 0.0
    return 1.0 / math.expm1(omega / T)


def temperature_from_occupation(omega: float, n: float) -> float:
    """Invert the Bose function; n = 0 maps to T = 0."""
    if n == 0:
        return 0.0
    return omega / math.log1p(1.0 / n)


def derive_bath_occupations(params: MaserParams) -> BathOccupations:
    T_h = temperature_from_occupation(params.omega2, params.n_h2)
    T_c = temperature_from_occupation(params.omega1, params.n_c)
    if params.delta == 0:
        n_h3 = params.n_h2
    else:
        n_h3 = bose(params.omega3, T_h)
    return BathOccupations(T_h=T_h, T_c=T_c, n_h3=n_h3)


def bare_hamiltonian(params: MaserParams) -> np.ndarray:
    return np.diag([0.0, params.omega1, params.omega2, params.omega3]).astype(complex)


def frame_hamiltonian(Omega: float) -> np.ndarray:
    """Generator of the rotating frame, (Omega/2)(|2><2| + |3><3| - |1><1|)."""
    return np.diag([0.0, -Omega / 2, Omega / 2, Omega / 2]).astype(complex)


def drive_operator(lam: float) -> np.ndarray:
    """Collective drive in the rotating frame, lam * sum_j |j><1| + h.c."""
    V = np.zeros((DIM, DIM), dtype=complex)
    V[2, 1] = V[3, 1] = lam
    V[1, 2] = V[1, 3] = lam
    return V


def build_effective_hamiltonian(params: MaserParams) -> np.ndarray:
    return (
        bare_hamiltonian(params)
        - frame_hamiltonian(params.Omega)
        + drive_operator(params.lambda_drive)
    )


def _cold_channels(params: MaserParams):
    g, n = params.gamma_c, params.n_c
    down = ket_bra(0, 1)
    return [(g * (1 + n), down), (g * n, down.conj().T)]


def apply_cold_dissipator(params: MaserParams, rho: np.ndarray) -> np.ndarray:
    out = np.zeros((DIM, DIM), dtype=complex)
    for rate, c in _cold_channels(params):
        cd = c.conj().T
        cdc = cd @ c
        out += rate * (2 * c @ rho @ cd - cdc @ rho - rho @ cdc)
    return out


def hot_rates(params: MaserParams):
    """Pairwise hot-bath rates keyed by channel.

    Returns ``(decay, excite)``, each a dict ``{(i, j): rate}`` over i, j in
    {2, 3} with rate = P_ij * gamma_h * (1 + n^(j)) for decay and
    P_ij * gamma_h * n^(j) for excitation.
    """
    n = {2: params.n_h2, 3: derive_bath_occupations(params).n_h3}
    decay, excite = {}, {}
    for i in (2, 3):
        for j in (2, 3):
            corr = 1.0 if i == j else params.p
            decay[i, j] = corr * params.gamma_h * (1 + n[j])
            excite[i, j] = corr * params.gamma_h * n[j]
    return decay, excite


def _hot_operators():
    # decay |0><i| and excitation |i><0|
    return {i: ket_bra(0, i) for i in (2, 3)}, {i: ket_bra(i, 0) for i in (2, 3)}


def apply_hot_dissipator(params: MaserParams, rho: np.ndarray) -> np.ndarray:
    decay, excite = hot_rates(params)
    ops_down, ops_up = _hot_operators()
    out = np.zeros((DIM, DIM), dtype=complex)
    for rates, ops in ((decay, ops_down), (excite, ops_up)):
        for i in (2, 3):
            for j in (2, 3):
                hi, hjd = ops[i], ops[j].conj().T
                # G_ij [h_i, rho h_j^+] + G_ji [h_i rho, h_j^+]
                out += rates[i, j] * (hi @ rho @ hjd - rho @ hjd @ hi)
                out += rates[j, i] * (hi @ rho @ hjd - hjd @ hi @ rho)
    return out


def generator_rhs(params: MaserParams, rho: np.ndarray) -> np.ndarray:
    """Right-hand side of the rotating-frame master equation."""
    H = build_effective_hamiltonian(params)
    return (
        -1j * (H @ rho - rho @ H)
        + apply_hot_dissipator(params, rho)
        + apply_cold_dissipator(params, rho)
    )


def lab_frame_drive(params: MaserParams, t: float) -> np.ndarray:
    # e^{-i Omega t} on |j><1| so that the frame exp(i H~ t) removes the time dependence
    phase = np.exp(-1j * params.Omega * t)
    V = np.zeros((DIM, DIM), dtype=complex)
    V[2, 1] = V[3, 1] = params.lambda_drive * phase
    V[1, 2] = V[1, 3] = params.lambda_drive * np.conj(phase)
    return V


def lab_frame_rhs(params: MaserParams, t: float, rho: np.ndarray) -> np.ndarray:
    H = bare_hamiltonian(params) + lab_frame_drive(params, t)
    return (
        -1j * (H @ rho - rho @ H)
        + apply_hot_dissipator(params, rho)
        + apply_cold_dissipator(params, rho)
    )


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho).flatten(order="F")


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape((DIM, DIM), order="F")


def _spre(A):
    return np.kron(_EYE, A)


def _spost(B):
    return np.kron(B.T, _EYE)


def _sandwich(A, B):
    return np.kron(B.T, A)


def vectorize_generator(params: MaserParams) -> np.ndarray:
    """16x16 Liouvillian built from Kronecker products.

    Assembled independently of :func:`generator_rhs`; the two are checked
    against each other in the tests.
    """
    H = build_effective_hamiltonian(params)
    L = -1j * (_spre(H) - _spost(H))
    for rate, c in _cold_channels(params):
        cd = c.conj().T
        cdc = cd @ c
        L += rate * (2 * _sandwich(c, cd) - _spre(cdc) - _spost(cdc))
    decay, excite = hot_rates(params)
    ops_down, ops_up = _hot_operators()
    for rates, ops in ((decay, ops_down), (excite, ops_up)):
        for i in (2, 3):
            for j in (2, 3):
                hi, hjd = ops[i], ops[j].conj().T
                L += rates[i, j] * (_sandwich(hi, hjd) - _spost(hjd @ hi))
                L += rates[j, i] * (_sandwich(hi, hjd) - _spre(hjd @ hi))
    return L


def is_hermitian(rho: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.max(np.abs(rho - rho.conj().T)) <= atol)


def check_state(rho: np.ndarray, atol: float = 1e-12) -> None:
    """Raise ValueError unless ``rho`` is a Hermitian, unit-trace 4x4 matrix."""
    rho = np.asarray(rho)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"expected a 4x4 matrix, got shape {rho.shape}")
    if not is_hermitian(rho, atol):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > atol:
        raise ValueError("density matrix does not have unit trace")
