"""Shared helpers for the test suite."""

from __future__ import annotations

import dataclasses

import numpy as np

from qevspeed.speed import Trajectory


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (m + m.conj().T)


def random_density(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = m @ m.conj().T
    return rho / np.trace(rho).real


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    m = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(m)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def conjugate_trajectory(traj: Trajectory, unitary: np.ndarray) -> Trajectory:
    """The trajectory t -> U rho_t U^dagger with everything else carried over."""
    u = np.asarray(unitary, dtype=complex)
    u_dag = u.conj().T
    state = traj.state_at
    derivative = traj.derivative_at
    return dataclasses.replace(
        traj,
        state_at=lambda t: u @ state(t) @ u_dag,
        derivative_at=(
            None if derivative is None else (lambda t: u @ derivative(t) @ u_dag)
        ),
    )


def without_analytic_derivative(traj: Trajectory) -> Trajectory:
    return dataclasses.replace(traj, derivative_at=None)
