"""Coefficient trajectories and their time averages.

Everything simulated here is a coefficient function: the rows of
C_a exp(A_a t) give each output's dependence on the initial quadratures, so
no initial condition is ever sampled. The propagator itself comes from
scaling-and-squaring (a diagonal rational approximant of fixed high order);
trajectories reuse the single-step propagator through the recurrence
Phi(t + h) = Phi(h) Phi(t) and re-certify the symplectic identity at every
sample so drift cannot accumulate silently.

Time averages (1/T) int_0^T C_a exp(A_a s) ds are computed two independent
ways: exactly, through the exponential of the doubled block matrix
[[A_a, I], [0, 0]] whose upper-right block is the integral (this works even
though A_a is singular, which rules out the A^{-1}(exp(AT) - I) shortcut);
and numerically, by composite Simpson quadrature on a sampled trajectory.
The two routes must agree to 1e-8 relative, and the CLI enforces that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import simpson
from scipy.linalg import expm

from .builder import AugmentedSystem
from .errors import (
    InvalidDimensionError,
    InvalidInputError,
    InvalidParameterError,
    NumericalFailureError,
    StepTooCoarseError,
    ToleranceExceededError,
)
from .lqs import symplectic_drift

# Quadrature is trustworthy only when the fastest mode is well resolved:
# at least 100 samples per shortest period, i.e. step <= 0.01 * (2 pi / w).
QUADRATURE_STEP_FACTOR = 0.01
DEFAULT_STEP_FACTOR = 0.005
DEFAULT_HORIZON = 500.0
SYMPLECTIC_DRIFT_TOL = 1e-9


@dataclass(frozen=True)
class TimeGrid:
    """Uniform sampling grid on [t0, t_end] with a step that divides the span."""

    t0: float
    t_end: float
    step: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.t0) and self.t0 >= 0.0):
            raise InvalidParameterError(f"t0 must be finite and nonnegative, got {self.t0!r}")
        if not (np.isfinite(self.t_end) and self.t_end > self.t0):
            raise InvalidParameterError(f"t_end must exceed t0, got {self.t_end!r}")
        if not (np.isfinite(self.step) and self.step > 0.0):
            raise InvalidParameterError(f"step must be positive, got {self.step!r}")
        span = self.t_end - self.t0
        intervals = round(span / self.step)
        if intervals < 1 or abs(intervals * self.step - span) > 1e-9 * max(span, 1.0):
            raise InvalidParameterError(
                f"step {self.step!r} does not divide the span {span!r} into whole intervals"
            )

    @property
    def samples(self) -> int:
        return round((self.t_end - self.t0) / self.step) + 1

    def times(self) -> np.ndarray:
        return self.t0 + self.step * np.arange(self.samples)

    @classmethod
    def covering(cls, t0: float, t_end: float, max_step: float) -> "TimeGrid":
        """Grid over [t0, t_end] whose step divides the span and is <= max_step."""
        if not (np.isfinite(max_step) and max_step > 0.0):
            raise InvalidParameterError(f"max_step must be positive, got {max_step!r}")
        span = t_end - t0
        intervals = max(1, math.ceil(span / max_step))
        while span / intervals > max_step:
            intervals += 1
        return cls(t0=t0, t_end=t_end, step=span / intervals)

    @classmethod
    def from_count(cls, t0: float, t_end: float, samples: int) -> "TimeGrid":
        if samples < 2:
            raise InvalidParameterError(f"a grid needs at least 2 samples, got {samples}")
        return cls(t0=t0, t_end=t_end, step=(t_end - t0) / (samples - 1))


@dataclass(frozen=True)
class Trajectory:
    """Sampled coefficient rows C_a Phi(t), one (N+1) x (2N+2) matrix per time."""

    grid: TimeGrid
    coefficient_rows: np.ndarray
    dims: tuple[int, int]
    omega_max: float


@dataclass(frozen=True)
class TimeAverage:
    """Averaged coefficient rows (1/T) int_0^T C_a Phi(t) dt up to horizon T."""

    horizon: float
    averaged_rows: np.ndarray
    method: str


def propagator(a: np.ndarray, t: float) -> np.ndarray:
    """Matrix exponential exp(a t)."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidDimensionError(f"dynamics matrix must be square, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("dynamics matrix contains non-finite entries")
    if not np.isfinite(t):
        raise InvalidInputError(f"time must be finite, got {t!r}")
    # overflow is detected explicitly below, so the intermediate warnings
    # from the scaling-and-squaring steps are just noise
    with np.errstate(over="ignore", invalid="ignore"):
        phi = expm(a * float(t))
    if not np.all(np.isfinite(phi)):
        raise NumericalFailureError(f"exponential overflowed at t = {t!r}")
    return phi


def max_frequency(a: np.ndarray) -> float:
    """Largest eigenvalue magnitude of a dynamics matrix (its fastest mode)."""
    a = np.asarray(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("dynamics matrix contains non-finite entries")
    return float(np.abs(np.linalg.eigvals(a)).max())


def default_step(aug: AugmentedSystem) -> float:
    """Default sampling step: half the quadrature ceiling for the fastest mode."""
    w = max_frequency(aug.a_a)
    if w == 0.0:
        raise InvalidParameterError("dynamics have no oscillatory modes to resolve")
    return DEFAULT_STEP_FACTOR * (2.0 * math.pi / w)


def coefficient_trajectory(aug: AugmentedSystem, grid: TimeGrid) -> Trajectory:
    """Sample C_a Phi(t) on the grid via the one-step recurrence.

    The symplectic identity Phi Theta Phi^T = Theta is re-checked at every
    sample against the relative tolerance 1e-9; exceeding it aborts the
    run, since coefficients from a non-symplectic propagator are garbage.
    """
    n_rows, dim = aug.c_a.shape
    theta_norm = float(np.linalg.norm(aug.theta.matrix, ord="fro"))
    step_phi = propagator(aug.a_a, grid.step)
    phi = np.eye(dim) if grid.t0 == 0.0 else propagator(aug.a_a, grid.t0)
    rows = np.empty((grid.samples, n_rows, dim))
    for k in range(grid.samples):
        drift = symplectic_drift(phi, aug.theta)
        if drift > SYMPLECTIC_DRIFT_TOL * theta_norm:
            raise ToleranceExceededError(
                f"symplectic drift {drift:.3e} exceeds {SYMPLECTIC_DRIFT_TOL:.0e} "
                f"* ||Theta||_F at sample {k}"
            )
        rows[k] = aug.c_a @ phi
        if k + 1 < grid.samples:
            phi = step_phi @ phi
    return Trajectory(
        grid=grid,
        coefficient_rows=rows,
        dims=(aug.n_elements, 1),
        omega_max=max_frequency(aug.a_a),
    )


def integral_of_propagator(a: np.ndarray, horizon: float) -> np.ndarray:
    """Exact int_0^T exp(a s) ds via the doubled block matrix.

    exp([[a, I], [0, 0]] T) has the integral as its upper-right block; this
    stays valid when a is singular.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidDimensionError(f"dynamics matrix must be square, got shape {a.shape}")
    if not (np.isfinite(horizon) and horizon > 0.0):
        raise InvalidParameterError(f"horizon must be positive, got {horizon!r}")
    n = a.shape[0]
    doubled = np.zeros((2 * n, 2 * n))
    doubled[:n, :n] = a
    doubled[:n, n:] = np.eye(n)
    with np.errstate(over="ignore", invalid="ignore"):
        block = expm(doubled * float(horizon))[:n, n:]
    if not np.all(np.isfinite(block)):
        raise NumericalFailureError(f"propagator integral overflowed at horizon {horizon!r}")
    return block


def time_average_exact(aug: AugmentedSystem, horizon: float) -> TimeAverage:
    """Exact time average of the coefficient rows up to the horizon."""
    integral = integral_of_propagator(aug.a_a, horizon)
    averaged = aug.c_a @ integral / float(horizon)
    return TimeAverage(
        horizon=float(horizon), averaged_rows=averaged, method="exact-block-exponential"
    )


def time_average_quadrature(trajectory: Trajectory) -> TimeAverage:
    """Composite-Simpson time average of a sampled trajectory from t = 0.

    Serves as the independent cross-check for time_average_exact; demands a
    grid that starts at zero and resolves the fastest mode (step at most
    0.01 of its period).
    """
    grid = trajectory.grid
    if grid.t0 != 0.0:
        raise InvalidParameterError("quadrature averages must start at t0 = 0")
    if trajectory.omega_max > 0.0:
        ceiling = QUADRATURE_STEP_FACTOR * (2.0 * math.pi / trajectory.omega_max)
        if grid.step > ceiling * (1.0 + 1e-12):
            raise StepTooCoarseError(
                f"step {grid.step:.6e} exceeds the quadrature ceiling {ceiling:.6e} "
                f"for the fastest mode {trajectory.omega_max:.6e}"
            )
    integral = simpson(trajectory.coefficient_rows, x=grid.times(), axis=0)
    return TimeAverage(
        horizon=grid.t_end, averaged_rows=integral / grid.t_end, method="quadrature"
    )


def spatial_average(trajectory: Trajectory) -> np.ndarray:
    """Per-sample mean of the observer rows (rows 2..N+1) of the trajectory."""
    return trajectory.coefficient_rows[:, 1:, :].mean(axis=1)


def consensus_error(avg: TimeAverage) -> float:
    """Largest distance from an observer row's average to the plant row's."""
    rows = avg.averaged_rows
    deviations = np.linalg.norm(rows[1:] - rows[0], axis=1)
    return float(deviations.max())
