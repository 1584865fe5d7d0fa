"""Instantaneous speed of evolution along a density-operator trajectory.

The speed at time t is

    S = (1/2) * sqrt( sum_{k,l} c(p_k, p_l) |<Phi_k| drho/dt |Phi_l>|^2 )

over the eigensystem {p_k, Phi_k} of rho_t, with c the metric kernel. An
equivalent spectral form splits the sum into eigenvalue motion and
eigenvector rotation,

    S = sqrt( sum_k qdot_k^2
              + sum_{k != l} c(p_k, p_l) p_k (p_k - p_l)/2 |<Phi_l|Phidot_k>|^2 )

with q_k = sqrt(p_k). Both are provided; the first is the primary path (its
diagonal kernel c(p, p) = 1/p is continuous through degeneracies), the second
needs a non-degenerate spectrum and is useful as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import linalg
from .errors import DegenerateSpectrumError, RankIncreaseError
from .metrics import PURE_STATE_TOL, MetricKind, mc_function, pure_state_speed

# Eigenvalue-pair sums below RANK_TOL are boundary terms: dropped when the
# corresponding derivative element is below ELEM_TOL, an error otherwise
# (the dynamics would be increasing the state rank).
RANK_TOL = 1e-12
ELEM_TOL = 1e-8

# Default central-difference step for time derivatives; parameter derivatives
# scale it by max(1, |xi|).
DEFAULT_TIME_STEP = 1e-5

# Trajectories that start on the state-space boundary with a divergent or
# undefined speed at t = 0 are evaluated at this clamped time instead.
ZERO_TIME_CLAMP = 1e-8


@dataclass(frozen=True)
class Trajectory:
    """A differentiable curve t -> rho_t of density operators on [0, horizon].

    ``state_at`` must return a Hermitian, trace-one, positive-semidefinite
    matrix of size ``dim`` for every t in range. ``derivative_at`` is the
    analytic time derivative when available; otherwise central differences of
    ``state_at`` are used. ``params`` records the numbers the trajectory was
    built from. ``speed_at_zero`` carries the analytic limit of the speed for
    trajectories whose t = 0 state sits on the manifold boundary (where the
    naive evaluation is 0/0); ``boundary_at_zero`` marks such trajectories
    when no finite limit exists.
    """

    dim: int
    horizon: float
    state_at: Callable[[float], np.ndarray]
    derivative_at: Callable[[float], np.ndarray] | None = None
    params: dict[str, float] = field(default_factory=dict)
    speed_at_zero: float | None = None
    boundary_at_zero: bool = False


@dataclass(frozen=True)
class SpeedCurve:
    """Speed samples along a time grid, with slopes from the samples."""

    metric: MetricKind
    times: np.ndarray
    speeds: np.ndarray
    slopes: np.ndarray  # dS/dt, central differences of the samples


def rho_dot(traj: Trajectory, t: float, step: float = DEFAULT_TIME_STEP) -> np.ndarray:
    """Time derivative of the state, Hermitian-symmetrized.

    Uses the trajectory's analytic derivative when present, otherwise a
    central difference with one-sided fallback at the interval endpoints.
    """
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if traj.derivative_at is not None:
        d = np.asarray(traj.derivative_at(t), dtype=complex)
    elif t - step < 0.0:
        d = (traj.state_at(t + step) - traj.state_at(t)) / step
    elif t + step > traj.horizon:
        d = (traj.state_at(t) - traj.state_at(t - step)) / step
    else:
        d = (traj.state_at(t + step) - traj.state_at(t - step)) / (2.0 * step)
    return 0.5 * (d + d.conj().T)


def speed_at(
    traj: Trajectory,
    t: float,
    metric: MetricKind = MetricKind.SLD,
    step: float = DEFAULT_TIME_STEP,
) -> float:
    """Instantaneous speed from the metric kernel sum over the eigensystem.

    Pure states (second-largest eigenvalue below ``PURE_STATE_TOL``) are
    routed through the Fubini-Study reduction. Boundary eigenvalue pairs are
    dropped when their derivative elements are negligible and raise
    ``RankIncreaseError`` otherwise.
    """
    if not 0.0 <= t <= traj.horizon:
        raise ValueError(f"t = {t} outside trajectory range [0, {traj.horizon}]")
    if t == 0.0:
        if traj.speed_at_zero is not None:
            return traj.speed_at_zero
        if traj.boundary_at_zero:
            t = ZERO_TIME_CLAMP
    rho = np.asarray(traj.state_at(t), dtype=complex)
    drho = rho_dot(traj, t, step)
    system = linalg.eigh(rho)
    p = np.clip(system.eigenvalues, 0.0, None)

    if p[-2] < PURE_STATE_TOL:
        psi = system.eigenvectors[:, -1]
        return pure_state_speed(psi, drho @ psi, metric)

    elements = system.eigenvectors.conj().T @ drho @ system.eigenvectors
    total = 0.0
    for k in range(traj.dim):
        for l in range(traj.dim):
            magnitude = abs(elements[k, l])
            if p[k] + p[l] < RANK_TOL:
                if magnitude >= ELEM_TOL:
                    raise RankIncreaseError(t, (k, l), magnitude)
                continue
            total += mc_function(metric, p[k], p[l]) * magnitude * magnitude
    return 0.5 * math.sqrt(max(total, 0.0))


def speed_spectral_form(
    traj: Trajectory,
    t: float,
    metric: MetricKind = MetricKind.SLD,
    step: float = DEFAULT_TIME_STEP,
) -> float:
    """Speed from eigenvalue/eigenvector derivatives (non-degenerate spectra).

    Eigen-derivatives come from phase-aligned central differences of the
    eigensystems at t -/+ step. Eigenvalues below ``RANK_TOL`` are inert: their
    sum terms vanish identically, so they are excluded rather than estimated
    from finite-difference noise. Degeneracy among the remaining eigenvalues
    raises ``DegenerateSpectrumError`` (use ``speed_at`` there instead).
    """
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    if t - step < 0.0 or t + step > traj.horizon:
        raise ValueError(
            f"t = {t} leaves no room for the central-difference stencil "
            f"of half-width {step}"
        )
    center = linalg.eigh(np.asarray(traj.state_at(t), dtype=complex))
    minus = linalg.eigh(np.asarray(traj.state_at(t - step), dtype=complex))
    plus = linalg.eigh(np.asarray(traj.state_at(t + step), dtype=complex))

    p = np.clip(center.eigenvalues, 0.0, None)
    active = np.flatnonzero(center.eigenvalues >= RANK_TOL)
    act_vals = center.eigenvalues[active]
    if act_vals.size > 1 and np.min(np.diff(act_vals)) < linalg.EIG_DEGENERACY_TOL:
        raise DegenerateSpectrumError(
            f"eigenvalues degenerate within {linalg.EIG_DEGENERACY_TOL:.1e} at "
            f"t = {t:.6g}; the Morozova-Chentsov sum (speed_at) is valid there"
        )

    base = center.eigenvectors

    def aligned(system: linalg.EigenSystem) -> np.ndarray:
        vectors = np.array(system.eigenvectors, copy=True)
        for k in active:
            z = np.vdot(base[:, k], vectors[:, k])
            if abs(z) < 0.9:
                raise DegenerateSpectrumError(
                    f"eigenvector pairing unstable across the stencil at "
                    f"t = {t:.6g} (overlap {abs(z):.3f}); likely an eigenvalue "
                    "crossing within the step"
                )
            vectors[:, k] *= z.conjugate() / abs(z)
        return vectors

    vectors_minus = aligned(minus)
    vectors_plus = aligned(plus)

    q_minus = np.sqrt(np.clip(minus.eigenvalues, 0.0, None))
    q_plus = np.sqrt(np.clip(plus.eigenvalues, 0.0, None))
    q_dot = (q_plus - q_minus) / (2.0 * step)
    dead = (
        (center.eigenvalues < RANK_TOL)
        & (minus.eigenvalues < RANK_TOL)
        & (plus.eigenvalues < RANK_TOL)
    )
    q_dot[dead] = 0.0

    total = float(np.sum(q_dot * q_dot))
    for k in active:
        phi_dot = (vectors_plus[:, k] - vectors_minus[:, k]) / (2.0 * step)
        overlaps = base.conj().T @ phi_dot
        for l in range(traj.dim):
            if l == k:
                continue
            total += (
                mc_function(metric, p[k], p[l])
                * p[k]
                * (p[k] - p[l])
                / 2.0
                * abs(overlaps[l]) ** 2
            )
    return math.sqrt(max(total, 0.0))


def speedup_measure(
    speed_of: Callable[[float], float], xi0: float, step: float | None = None
) -> float:
    """Central-difference estimate of dS/dxi at xi0.

    A positive value detects dynamical speedup in the swept parameter; any
    evaluation failure of ``speed_of`` propagates.
    """
    if step is None:
        step = DEFAULT_TIME_STEP * max(1.0, abs(xi0))
    if step <= 0.0:
        raise ValueError(f"step must be positive, got {step}")
    return (speed_of(xi0 + step) - speed_of(xi0 - step)) / (2.0 * step)


def speed_curve(
    traj: Trajectory, grid: np.ndarray, metric: MetricKind = MetricKind.SLD
) -> SpeedCurve:
    """Sample the speed over a strictly increasing time grid.

    Slopes are central differences of the sampled speeds (one-sided at the
    endpoints), so they converge with the grid spacing rather than the
    internal step size.
    """
    times = np.asarray(grid, dtype=float)
    if times.ndim != 1 or times.size < 2:
        raise ValueError("grid must be a 1-d array with at least two points")
    if np.any(np.diff(times) <= 0.0):
        raise ValueError("grid must be strictly increasing")
    if times[0] < 0.0 or times[-1] > traj.horizon:
        raise ValueError(
            f"grid [{times[0]}, {times[-1]}] outside trajectory range "
            f"[0, {traj.horizon}]"
        )
    speeds = np.array([speed_at(traj, float(t), metric) for t in times])
    slopes = np.empty_like(speeds)
    slopes[0] = (speeds[1] - speeds[0]) / (times[1] - times[0])
    slopes[-1] = (speeds[-1] - speeds[-2]) / (times[-1] - times[-2])
    if times.size > 2:
        slopes[1:-1] = (speeds[2:] - speeds[:-2]) / (times[2:] - times[:-2])
    return SpeedCurve(metric, times, speeds, slopes)
