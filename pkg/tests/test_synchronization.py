import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ndmaser.errors import PreconditionViolated
from ndmaser.model import MaserParams
from ndmaser.steady_state import solve_steady_state
from ndmaser.synchronization import (
    COOPERATIVE,
    ENTRAINMENT,
    MUTUAL,
    NORM,
    dissipation_to_driving_ratio,
    phase_distribution,
    smax_closed_form,
    smax_numeric,
    synchronization,
    torus_grid,
)

from conftest import P_GRID, RATIO_GRID, degenerate_params


def _rho(r12, r13, r23):
    rho = np.diag([0.4, 0.2, 0.2, 0.2]).astype(complex)
    rho[1, 2], rho[1, 3], rho[2, 3] = r12, r13, r23
    return rho + np.triu(rho, 1).conj().T - np.diag(np.diag(np.triu(rho, 1)))


def test_k_panel_values():
    base = MaserParams(gamma_h=0.1, lambda_drive=0.05, n_c=0.1)
    for ratio, p, k in ((5, 0.5, 4.5), (5, -0.99, 0.03), (0.5, 0.5, 3.15), (0.5, -0.99, 0.021)):
        assert dissipation_to_driving_ratio(base.with_(n_h2=0.1 * ratio, p=p)) == pytest.approx(k, abs=1e-12)


def test_k_undefined_without_drive():
    with pytest.raises(ZeroDivisionError):
        dissipation_to_driving_ratio(MaserParams(lambda_drive=0.0))


def test_grid_starts_at_minus_pi():
    g = torus_grid(16)
    assert g[0] == -math.pi and g[-1] < math.pi and len(g) == 16


def test_uniform_distribution_maximum_tiebreak():
    # all coherences zero: every grid point ties and the first one wins
    dist = phase_distribution(np.eye(4) / 4, 64)
    assert dist.argmax() == (-math.pi, -math.pi)
    assert smax_numeric(np.eye(4) / 4, 64)[0] == 0


def test_grid_minimum_size():
    with pytest.raises(ValueError):
        phase_distribution(np.eye(4) / 4, 8)


def test_distribution_value():
    rho = _rho(0.1j, 0.1j, 0.05)
    dist = phase_distribution(rho, 16)
    x = dist.phases[3]
    y = dist.phases[7]
    expected = NORM * (-0.1 * math.sin(x) - 0.1 * math.sin(y) + 0.05 * math.cos(x - y))
    assert dist.values[3, 7] == pytest.approx(expected)


def _brute_max(r12, r13, r23, n=601):
    x = np.linspace(-np.pi, np.pi, n)
    X, Y = np.meshgrid(x, x, indexing="ij")
    v = np.real(r12 * np.exp(1j * X)) + np.real(r13 * np.exp(1j * Y)) + np.real(r23 * np.exp(1j * (X - Y)))
    return NORM * v.max()


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=0.2, allow_nan=False, allow_infinity=False), min_size=3, max_size=3))
def test_numeric_max_dominates_dense_scan(cs):
    r12, r13, r23 = cs
    value, _ = smax_numeric(_rho(r12, r13, r23), 32)
    assert value >= _brute_max(r12, r13, r23) - 1e-12
    assert value <= NORM * (abs(r12) + abs(r13) + abs(r23)) + 1e-15


@pytest.mark.parametrize("ratio", RATIO_GRID)
@pytest.mark.parametrize("p", P_GRID)
def test_closed_form_matches_numeric(ratio, p):
    params = degenerate_params(ratio, p)
    rho = solve_steady_state(params).rho_ss
    res = synchronization(params, rho)
    assert res.s_max_numeric == pytest.approx(res.s_max_closed, rel=1e-6)


def test_branches():
    assert synchronization(degenerate_params(5, 0.5), solve_steady_state(degenerate_params(5, 0.5)).rho_ss).branch == ENTRAINMENT
    assert synchronization(degenerate_params(5, -0.99), solve_steady_state(degenerate_params(5, -0.99)).rho_ss).branch == MUTUAL
    assert synchronization(degenerate_params(0.5, 0.5), solve_steady_state(degenerate_params(0.5, 0.5)).rho_ss).branch == COOPERATIVE


def test_closed_form_requires_equal_coherences():
    with pytest.raises(PreconditionViolated):
        smax_closed_form(_rho(0.1j, 0.2j, 0.01), 3.0, "engine")


def test_closed_form_continuous_at_crossover():
    # at k = 2 both engine branches coincide when |rho12| = k |rho23| / 2
    a23 = 0.01
    rho = _rho(2j * a23, 2j * a23, -a23)
    assert smax_closed_form(rho, 2.0, "engine") == pytest.approx(smax_closed_form(rho, 2.0 + 1e-12, "engine"))


def test_csv_export(tmp_path):
    dist = phase_distribution(_rho(0.1j, 0.1j, 0.05), 16)
    path = tmp_path / "d.csv"
    dist.to_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "phi21,phi31,S"
    assert len(lines) == 1 + 16 * 16
