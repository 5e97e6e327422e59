import numpy as np
import pytest

from ndmaser.model import MaserParams


@pytest.fixture
def fig2a():
    """Default parameters on the engine side with p = 0.5."""
    return MaserParams(n_h2=0.5, p=0.5)


@pytest.fixture
def fig2a_degenerate(fig2a):
    return fig2a.with_(delta=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20231019)


def random_hermitian(rng, unit_trace=False):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    h = a + a.conj().T
    if unit_trace:
        h = h / np.trace(h).real
    return h


def random_state(rng):
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


# (n_h2 / n_c, p) grid used by the degenerate-limit checks
RATIO_GRID = (0.2, 0.5, 2.0, 5.0)
P_GRID = (-0.99, -0.5, 0.0, 0.5, 0.9)


def degenerate_params(ratio, p, **kw):
    return MaserParams(delta=0.0, n_h2=0.1 * ratio, p=p, **kw)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
