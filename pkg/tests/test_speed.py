import math

import numpy as np
import pytest

from qevspeed.errors import DegenerateSpectrumError, RankIncreaseError
from qevspeed.metrics import MetricKind, pure_state_speed
from qevspeed.models import (
    ClosedQubitParams,
    OpenSystemParams,
    open_qubit_trajectory,
    open_two_qubit_trajectory,
    population_factor,
    precession_trajectory,
    two_qubit_closed_trajectory,
)
from qevspeed.speed import (
    Trajectory,
    rho_dot,
    speed_at,
    speed_curve,
    speed_spectral_form,
    speedup_measure,
)
from util import conjugate_trajectory, random_unitary, without_analytic_derivative

SLD = MetricKind.SLD
WY = MetricKind.WY


def stationary_trajectory() -> Trajectory:
    rho = np.diag([0.3, 0.7]).astype(complex)
    return Trajectory(dim=2, horizon=10.0, state_at=lambda t: rho.copy())


def diagonal_trajectory() -> Trajectory:
    """Constant eigenvectors, eigenvalues (p(t), 1 - p(t)) with p < 1/2."""

    def p(t):
        return 0.25 + 0.1 * math.sin(t)

    def state(t):
        return np.diag([p(t), 1.0 - p(t)]).astype(complex)

    return Trajectory(dim=2, horizon=10.0, state_at=state)


def rotating_mixed_trajectory() -> Trajectory:
    """Moving eigenvalues and rotating eigenvectors; no analytic derivative."""
    axis = np.array([0.3, 0.5, 0.8])
    axis /= np.linalg.norm(axis)
    sigma = np.array(
        [
            [[0, 1], [1, 0]],
            [[0, -1j], [1j, 0]],
            [[1, 0], [0, -1]],
        ],
        dtype=complex,
    )
    generator = np.tensordot(axis, sigma, axes=1)
    rate = 0.9

    def state(t):
        angle = rate * t
        u = math.cos(angle) * np.eye(2) - 1j * math.sin(angle) * generator
        d = 0.3 + 0.1 * math.sin(0.7 * t)
        return u @ np.diag([d, 1.0 - d]).astype(complex) @ u.conj().T

    return Trajectory(dim=2, horizon=10.0, state_at=state)


class TestRhoDot:
    def test_stationary_is_zero(self):
        d = rho_dot(stationary_trajectory(), 1.0)
        np.testing.assert_allclose(d, np.zeros((2, 2)), atol=1e-12)

    def test_finite_difference_matches_analytic_closed(self):
        traj = precession_trajectory(ClosedQubitParams.from_alpha(0.6, omega=1.3))
        numeric = without_analytic_derivative(traj)
        for t in (0.3, 1.7, 4.0):
            np.testing.assert_allclose(
                rho_dot(numeric, t, 1e-5), rho_dot(traj, t), atol=1e-8
            )

    def test_open_population_rate(self):
        # d/dt of the excited-population entry equals rho_11(0) * dP/dt
        params = OpenSystemParams(alpha=0.8, Gamma=0.5)
        traj = open_qubit_trajectory(params)
        h = 1e-6
        for t in (0.4, 1.1, 3.0):
            fd = (population_factor(params, t + h) - population_factor(params, t - h)) / (
                2 * h
            )
            analytic = rho_dot(traj, t)[0, 0].real
            assert analytic == pytest.approx(0.64 * fd, abs=1e-8)

    def test_endpoints_use_one_sided_differences(self):
        traj = without_analytic_derivative(
            precession_trajectory(ClosedQubitParams.from_alpha(0.6), horizon=1.0)
        )
        left = rho_dot(traj, 0.0, 1e-6)
        right = rho_dot(traj, 1.0, 1e-6)
        exact = precession_trajectory(ClosedQubitParams.from_alpha(0.6), horizon=1.0)
        np.testing.assert_allclose(left, rho_dot(exact, 0.0), atol=1e-5)
        np.testing.assert_allclose(right, rho_dot(exact, 1.0), atol=1e-5)

    def test_result_is_hermitian(self):
        traj = rotating_mixed_trajectory()
        d = rho_dot(traj, 1.3)
        np.testing.assert_allclose(d, d.conj().T, atol=1e-14)

    def test_rejects_nonpositive_step(self):
        with pytest.raises(ValueError, match="positive"):
            rho_dot(stationary_trajectory(), 1.0, 0.0)


class TestSpeedAt:
    def test_closed_qubit_uniform_speed(self):
        traj = precession_trajectory(ClosedQubitParams.from_alpha(0.6, omega=1.0))
        for t in (0.0, 0.5, 2.0, 7.3):
            assert speed_at(traj, t, SLD) == pytest.approx(0.48, rel=1e-12)

    def test_stationary_speed_is_zero(self):
        assert speed_at(stationary_trajectory(), 1.0, SLD) == pytest.approx(0.0, abs=1e-10)

    def test_markovian_qubit_value(self):
        # S = 1 / (2 sqrt(e - 1)) at t = 1 for alpha = 1
        traj = open_qubit_trajectory(OpenSystemParams(alpha=1.0, markovian_limit=True))
        expected = 0.5 / math.sqrt(math.e - 1.0)
        assert speed_at(traj, 1.0, SLD) == pytest.approx(expected, rel=1e-10)

    def test_zero_time_returns_advertised_limit(self):
        params = OpenSystemParams(alpha=1.0, Gamma=0.1)
        traj = open_qubit_trajectory(params)
        assert speed_at(traj, 0.0, SLD) == pytest.approx(math.sqrt(0.05), rel=1e-12)

    def test_out_of_range_rejected(self):
        with pytest.raises(ValueError, match="outside"):
            speed_at(stationary_trajectory(), 11.0, SLD)

    def test_nonnegative_on_models(self):
        trajectories = [
            precession_trajectory(ClosedQubitParams.from_alpha(0.4)),
            open_qubit_trajectory(OpenSystemParams(alpha=0.7, Gamma=0.5)),
            open_two_qubit_trajectory(OpenSystemParams(alpha=0.6, Gamma=2.5), "aligned"),
        ]
        for traj in trajectories:
            for t in np.linspace(0.1, 8.0, 25):
                assert speed_at(traj, float(t), SLD) >= 0.0

    def test_rank_increase_raises(self):
        rho = np.diag([0.5, 0.5, 0.0, 0.0]).astype(complex)
        coupling = np.zeros((4, 4), dtype=complex)
        coupling[2, 3] = coupling[3, 2] = 1e-3
        traj = Trajectory(
            dim=4,
            horizon=10.0,
            state_at=lambda t: rho.copy(),
            derivative_at=lambda t: coupling.copy(),
        )
        with pytest.raises(RankIncreaseError, match="rank"):
            speed_at(traj, 1.0, SLD)


class TestSpectralForm:
    def test_diagonal_trajectory_matches_eigenvalue_motion(self):
        traj = diagonal_trajectory()
        for t in (0.5, 1.2, 2.8):
            p = 0.25 + 0.1 * math.sin(t)
            p_dot = 0.1 * math.cos(t)
            expected = math.hypot(p_dot / (2 * math.sqrt(p)), p_dot / (2 * math.sqrt(1 - p)))
            assert speed_spectral_form(traj, t, SLD) == pytest.approx(expected, rel=1e-8)

    def test_anti_aligned_open_pair(self):
        # constant eigenvectors, eigenvalues {P, 1-P}: S = |dP/dt| / (2 sqrt(P(1-P)))
        params = OpenSystemParams(alpha=0.6, Gamma=0.5)
        traj = open_two_qubit_trajectory(params, "anti")
        h = 1e-7
        for t in (0.5, 1.0, 2.5):
            pop = population_factor(params, t)
            slope = (
                population_factor(params, t + h) - population_factor(params, t - h)
            ) / (2 * h)
            expected = abs(slope) / (2 * math.sqrt(pop * (1 - pop)))
            assert speed_spectral_form(traj, t, SLD) == pytest.approx(expected, rel=1e-6)

    def test_agrees_with_kernel_sum_on_rotating_state(self):
        traj = rotating_mixed_trajectory()
        for t in (0.4, 1.1, 2.9, 5.0):
            direct = speed_at(traj, t, SLD)
            spectral = speed_spectral_form(traj, t, SLD)
            assert spectral == pytest.approx(direct, rel=1e-6)
            assert speed_spectral_form(traj, t, WY) == pytest.approx(
                speed_at(traj, t, WY), rel=1e-6
            )

    def test_degenerate_spectrum_raises(self):
        traj = open_qubit_trajectory(OpenSystemParams(alpha=1.0, markovian_limit=True))
        with pytest.raises(DegenerateSpectrumError):
            speed_spectral_form(traj, math.log(2.0), SLD)

    def test_crossing_inside_stencil_raises(self):
        traj = open_qubit_trajectory(OpenSystemParams(alpha=1.0, markovian_limit=True))
        with pytest.raises(DegenerateSpectrumError):
            speed_spectral_form(traj, math.log(2.0) - 0.5e-5, SLD, step=1e-5)

    def test_requires_room_for_stencil(self):
        with pytest.raises(ValueError, match="stencil"):
            speed_spectral_form(stationary_trajectory(), 0.0, SLD)


class TestSpeedupMeasure:
    def test_closed_qubit_no_longitudinal_speedup(self):
        traj = precession_trajectory(ClosedQubitParams.from_alpha(0.6))
        value = speedup_measure(lambda t: speed_at(traj, t, SLD), 2.0)
        assert abs(value) <= 1e-10

    def test_closed_alpha_derivative_vanishes_at_balance(self):
        # S(alpha) = omega alpha sqrt(1 - alpha^2) peaks at alpha = 1/sqrt2

        def speed_of_alpha(alpha):
            traj = precession_trajectory(ClosedQubitParams.from_alpha(alpha, 1.0))
            return speed_at(traj, 1.0, SLD)

        assert abs(speedup_measure(speed_of_alpha, 1.0 / math.sqrt(2.0))) <= 1e-8

    def test_default_step_scales_with_argument(self):
        values = []

        def probe(x):
            values.append(x)
            return x * x

        speedup_measure(probe, 100.0)
        assert values == pytest.approx([100.0 + 1e-3, 100.0 - 1e-3])

    def test_rejects_nonpositive_step(self):
        with pytest.raises(ValueError, match="positive"):
            speedup_measure(lambda x: x, 1.0, step=-1e-5)


class TestSpeedCurve:
    def test_closed_constant_column(self):
        traj = precession_trajectory(ClosedQubitParams.from_alpha(0.6, omega=1.0))
        curve = speed_curve(traj, np.linspace(0.0, 5.0, 11), SLD)
        np.testing.assert_allclose(curve.speeds, 0.48, rtol=1e-12)
        np.testing.assert_allclose(curve.slopes, 0.0, atol=1e-10)

    def test_two_point_grid_one_sided(self):
        traj = precession_trajectory(ClosedQubitParams.from_alpha(0.6))
        curve = speed_curve(traj, np.array([1.0, 2.0]), SLD)
        assert curve.speeds.shape == (2,)
        assert np.all(np.isfinite(curve.slopes))

    def test_memoryless_regime_decelerates_throughout(self):
        traj = open_qubit_trajectory(OpenSystemParams(alpha=1.0, Gamma=10.0))
        curve = speed_curve(traj, np.linspace(0.025, 10.0, 200), SLD)
        assert np.all(curve.slopes[1:-1] < 0.0)

    def test_grid_validation(self):
        traj = precession_trajectory(ClosedQubitParams.from_alpha(0.6))
        with pytest.raises(ValueError, match="two points"):
            speed_curve(traj, np.array([1.0]), SLD)
        with pytest.raises(ValueError, match="increasing"):
            speed_curve(traj, np.array([1.0, 1.0]), SLD)
        with pytest.raises(ValueError, match="outside"):
            speed_curve(traj, np.array([1.0, 99.0]), SLD)


class TestInvariants:
    def test_unitary_covariance(self):
        rng = np.random.default_rng(31)
        cases = [
            precession_trajectory(ClosedQubitParams.from_alpha(0.6)),
            open_qubit_trajectory(OpenSystemParams(alpha=0.8, Gamma=0.4)),
            open_two_qubit_trajectory(OpenSystemParams(alpha=0.6, Gamma=3.0), "aligned"),
        ]
        for traj in cases:
            u = random_unitary(rng, traj.dim)
            rotated = conjugate_trajectory(traj, u)
            for t in np.linspace(0.2, 6.0, 12):
                t = float(t)
                assert speed_at(rotated, t, SLD) == pytest.approx(
                    speed_at(traj, t, SLD), abs=1e-10, rel=1e-10
                )

    def test_pure_state_consistency_closed_models(self):
        a, w = 0.6, 1.4
        b = math.sqrt(1 - a * a)
        traj = precession_trajectory(ClosedQubitParams.from_alpha(a, w))
        for t in (0.3, 1.9, 4.4):
            phase = np.exp(-0.5j * w * t)
            psi = np.array([a * phase, b / phase])
            psi_dot = np.array([-0.5j * w * a * phase, 0.5j * w * b / phase])
            assert speed_at(traj, t, SLD) == pytest.approx(
                pure_state_speed(psi, psi_dot, SLD), abs=1e-8
            )

    def test_wy_ratio_on_pure_trajectories(self):
        cases = [
            precession_trajectory(ClosedQubitParams.from_alpha(0.6, 1.2)),
            two_qubit_closed_trajectory(ClosedQubitParams.from_alpha(0.8, 0.7), "aligned"),
        ]
        for traj in cases:
            for t in (0.2, 1.5, 3.3):
                sld = speed_at(traj, t, SLD)
                wy = speed_at(traj, t, WY)
                assert wy == pytest.approx(math.sqrt(2.0) * sld, abs=1e-10)

    def test_curve_integral_second_order_in_grid(self):
        # cumulative trapezoid length converges at order >= 1.9 under refinement
        traj = open_qubit_trajectory(OpenSystemParams(alpha=1.0, Gamma=10.0))

        def integral(points):
            curve = speed_curve(traj, np.linspace(0.5, 8.0, points), SLD)
            return float(np.trapezoid(curve.speeds, curve.times))

        coarse, mid, fine = integral(200), integral(400), integral(800)
        order = math.log2(abs(coarse - mid) / abs(mid - fine))
        assert order >= 1.9
