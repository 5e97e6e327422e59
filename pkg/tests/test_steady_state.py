import numpy as np
import pytest

from ndmaser.errors import DarkState, NonPhysical, PreconditionViolated
from ndmaser.model import MaserParams, generator_rhs
from ndmaser.steady_state import (
    analytic_steady_state,
    check_positivity,
    closed_form_elements,
    evolve,
    evolve_lab_frame,
    evolve_steady_state,
    liouvillian_gap,
    numeric_steady_state,
    rotating_frame_transform,
    solve_steady_state,
)

from conftest import P_GRID, RATIO_GRID, degenerate_params, random_state


@pytest.mark.parametrize("ratio", RATIO_GRID)
@pytest.mark.parametrize("p", P_GRID)
def test_analytic_matches_nullspace(ratio, p):
    params = degenerate_params(ratio, p)
    a = analytic_steady_state(params).rho_ss
    n = numeric_steady_state(params).rho_ss
    assert np.abs(a - n).max() <= 1e-10


def test_analytic_state_is_fixed_point(fig2a_degenerate):
    sol = analytic_steady_state(fig2a_degenerate)
    assert sol.residual <= 1e-14
    assert np.trace(sol.rho_ss) == pytest.approx(1)
    assert np.allclose(sol.rho_ss, sol.rho_ss.conj().T)


def test_reference_closed_forms_agree_except_rho22():
    # gamma_c = 1 hides the missing factor in the reference rho22
    sol = analytic_steady_state(MaserParams(delta=0, gamma_c=1.0, p=0.3))
    assert sol.closed_form_mismatch == {}
    sol = analytic_steady_state(MaserParams(delta=0, p=0.3))
    assert set(sol.closed_form_mismatch) == {"rho22"}


def test_closed_form_coherences_independent():
    params = MaserParams(delta=0, p=0.2, n_h2=0.7)
    rho = numeric_steady_state(params).rho_ss
    reference = closed_form_elements(params)
    assert rho[1, 2] == pytest.approx(reference["rho12"], rel=1e-9)
    assert rho[2, 3] == pytest.approx(reference["rho23"], rel=1e-9)
    assert rho[1, 1].real == pytest.approx(reference["rho11"], rel=1e-9)


def test_no_drive_gives_thermal_populations():
    params = MaserParams(delta=0, lambda_drive=0.0, p=0.0, n_c=0.2, n_h2=0.4)
    rho = numeric_steady_state(params).rho_ss
    assert rho[1, 1].real / rho[0, 0].real == pytest.approx(0.2 / 1.2)
    assert rho[2, 2].real / rho[0, 0].real == pytest.approx(0.4 / 1.4)
    assert np.abs(rho - np.diag(np.diag(rho))).max() < 1e-14


def test_analytic_preconditions():
    with pytest.raises(PreconditionViolated):
        analytic_steady_state(MaserParams(delta=0.05))
    with pytest.raises(PreconditionViolated):
        analytic_steady_state(MaserParams(delta=0.0, omega_drive=2.1))
    with pytest.raises(DarkState):
        analytic_steady_state(MaserParams(delta=0.0, p=1.0))


def test_dark_state_reported_with_basis():
    with pytest.raises(DarkState) as info:
        numeric_steady_state(MaserParams(delta=0.0, lambda_drive=0.0, p=1.0))
    assert info.value.nullspace_dim >= 2
    assert len(info.value.basis) == info.value.nullspace_dim


def test_p_one_with_drive_and_detuning_is_unique():
    sol = numeric_steady_state(MaserParams(p=1.0))
    assert sol.nullspace_dim == 1
    assert sol.residual < 1e-12


def test_positivity_guard():
    assert check_positivity(np.eye(4) / 4) == pytest.approx(0.25)
    with pytest.raises(NonPhysical):
        check_positivity(np.diag([1.1, -0.1, 0, 0]))
    with pytest.warns(UserWarning):
        check_positivity(np.diag([1 + 1e-8, -1e-8, 0, 0]))


def test_evolution_converges_to_kernel(fig2a):
    rho_ev = evolve_steady_state(fig2a, t_final=2000.0).rho_ss
    rho_ns = numeric_steady_state(fig2a).rho_ss
    assert np.abs(rho_ev - rho_ns).max() < 1e-8


def test_evolution_preserves_trace(fig2a, rng):
    for t, rho in evolve(fig2a, random_state(rng), t_final=20.0, n_samples=5):
        assert np.trace(rho) == pytest.approx(1, abs=1e-10)


def test_gap_positive(fig2a):
    assert liouvillian_gap(fig2a) > 0


def test_rotating_frame_transform_is_unitary_phase(rng):
    rho = random_state(rng)
    out = rotating_frame_transform(rho, 3.7, 2.0)
    assert np.allclose(np.abs(out), np.abs(rho))
    assert np.allclose(np.diag(out), np.diag(rho))
    assert out[1, 2] == pytest.approx(rho[1, 2] * np.exp(-1j * 2.0 * 3.7))


def test_lab_frame_short_time(fig2a, rng):
    rho0 = random_state(rng)
    lab = evolve_lab_frame(fig2a, rho0, 5.0, n_samples=2)[-1][1]
    rot = evolve(fig2a, rho0, 5.0, n_samples=2)[-1][1]
    assert np.abs(rotating_frame_transform(lab, 5.0, fig2a.Omega) - rot).max() < 1e-7


def test_dispatch():
    assert solve_steady_state(MaserParams(delta=0)).method == "analytic"
    assert solve_steady_state(MaserParams()).method == "nullspace"
    with pytest.raises(ValueError):
        solve_steady_state(MaserParams(), "magic")


def test_steady_state_annihilated(fig2a):
    rho = solve_steady_state(fig2a).rho_ss
    assert np.abs(generator_rhs(fig2a, rho)).max() < 1e-13
