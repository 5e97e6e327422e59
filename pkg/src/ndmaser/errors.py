"""Exception types raised by the maser solvers and bound checks."""


class MaserError(Exception):
    """Base class for all package errors."""


class PreconditionViolated(MaserError, ValueError):
    """An operation was called outside its domain of validity."""


class DarkState(MaserError):
    """The generator has a degenerate kernel; no unique steady state exists.

    ``basis`` holds the trace-normalisable kernel vectors as 4x4 matrices so
    callers can inspect the manifold instead of getting an arbitrary pick.
    """

    def __init__(self, nullspace_dim, basis=None):
        self.nullspace_dim = nullspace_dim
        self.basis = [] if basis is None else list(basis)
        super().__init__(f"degenerate steady-state manifold of dimension {nullspace_dim}")


class NonPhysical(MaserError):
    """A computed state has a negative eigenvalue beyond tolerance."""

    def __init__(self, min_eigenvalue):
        self.min_eigenvalue = min_eigenvalue
        super().__init__(f"state has eigenvalue {min_eigenvalue:.3e} < -1e-6")


class StepSizeUnderflow(MaserError, RuntimeError):
    """The adaptive integrator could not make progress."""


class RegimeMismatch(MaserError, ValueError):
    """A figure of merit was requested for the wrong operating regime."""


class DegenerateSync(MaserError, ValueError):
    """S_max vanishes so a bound ratio is undefined."""


class UndefinedForZeroP(MaserError, ValueError):
    """The coherent-heat bound is 0/0 when there is no interference."""


class InsufficientData(MaserError, ValueError):
    """Not enough classified sweep points to build a summary."""


class ConfigError(MaserError, ValueError):
    """Invalid sweep configuration."""
