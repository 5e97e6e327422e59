"""Near-degenerate four-level thermal maser: steady states, synchronization and bounds."""
from .errors import (
    ConfigError,
    DarkState,
    DegenerateSync,
    InsufficientData,
    MaserError,
    NonPhysical,
    PreconditionViolated,
    RegimeMismatch,
    StepSizeUnderflow,
    UndefinedForZeroP,
)
from .bounds import bound_report, summary_table
from .model import MaserParams, derive_bath_occupations, generator_rhs, vectorize_generator
from .steady_state import analytic_steady_state, evolve, numeric_steady_state, solve_steady_state
from .synchronization import dissipation_to_driving_ratio, phase_distribution, smax_closed_form, smax_numeric
from .thermodynamics import ThermoCurrents, analytic_currents, currents

__version__ = "0.1.0"
