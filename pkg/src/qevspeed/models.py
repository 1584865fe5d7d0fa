"""Built-in model dynamics: spin precession and amplitude-damped qubits.

Basis convention: the single-qubit basis is ordered (|1>, |0>) with the
excited state first, so density matrices read

    [[rho_11, rho_10],
     [rho_01, rho_00]]

and the two-qubit product basis is (|11>, |10>, |01>, |00>).

Closed models: one or two non-interacting spins precessing under
H = (omega/2) sigma_z per spin. Open models: each qubit couples to its own
leaky vacuum cavity with a Lorentzian coupling spectrum of width Gamma and
Markovian-limit rate gamma0. The exact reduced dynamics scales the excited
population by P_t = G_t^2 and the coherence by G_t, where

    G_t = exp(-Gamma t / 2) [cos(kappa t / 2) + (Gamma/kappa) sin(kappa t / 2)]

with kappa = sqrt(2 gamma0 Gamma - Gamma^2) for Gamma < 2 gamma0 (the
oscillatory, memory-carrying regime), the analytic continuation with
hyperbolic functions for Gamma > 2 gamma0, the degenerate form
exp(-Gamma t / 2)(1 + Gamma t / 2) at kappa = 0, and exp(-gamma0 t / 2) in
the Markovian limit Gamma -> infinity. Times and rates are dimensionless in
units of gamma0 (closed models: units of omega) once gamma0 = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DivergenceError
from .linalg import PAULI_Y, assert_density, tensor
from .speed import Trajectory

# Width of the window around Gamma = 2 gamma0 treated as the degenerate
# (kappa = 0) branch, measured on kappa in units of gamma0.
CRITICAL_KAPPA_TOL = 1e-12

_NORM_TOL = 1e-12

MODEL_KEYS = (
    "closed-1q",
    "closed-2q-aligned",
    "closed-2q-anti",
    "open-1q",
    "open-2q-aligned",
    "open-2q-anti",
)


@dataclass(frozen=True)
class ClosedQubitParams:
    """Level splitting and initial amplitudes alpha|1> + beta|0> per spin."""

    omega: float
    alpha: complex
    beta: complex

    def __post_init__(self):
        if not self.omega > 0.0:
            raise ValueError(f"omega must be positive, got {self.omega}")
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > _NORM_TOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 must be 1, got {norm:.12g}")

    @staticmethod
    def from_alpha(alpha: float, omega: float = 1.0) -> "ClosedQubitParams":
        """Real-amplitude parameterization with beta = sqrt(1 - alpha^2)."""
        if not 0.0 <= alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
        return ClosedQubitParams(omega, alpha, math.sqrt(1.0 - alpha * alpha))


@dataclass(frozen=True)
class OpenSystemParams:
    """Damped-qubit bath parameters.

    Exactly one of ``Gamma`` (finite spectral width) or ``markovian_limit``
    must be set. ``alpha`` is the real initial excited amplitude.
    """

    alpha: float = 1.0
    gamma0: float = 1.0
    Gamma: float | None = None
    markovian_limit: bool = False

    def __post_init__(self):
        if not self.gamma0 > 0.0:
            raise ValueError(f"gamma0 must be positive, got {self.gamma0}")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.markovian_limit == (self.Gamma is not None):
            raise ValueError("set exactly one of Gamma or markovian_limit")
        if self.Gamma is not None and not self.Gamma > 0.0:
            raise ValueError(f"Gamma must be positive, got {self.Gamma}")

    @property
    def Omega(self) -> float:
        """Inverse width ratio gamma0 / Gamma (0 in the Markovian limit)."""
        return 0.0 if self.markovian_limit else self.gamma0 / self.Gamma

    @property
    def kappa(self) -> float:
        """|2 gamma0 Gamma - Gamma^2|^(1/2); real oscillation rate when
        Gamma < 2 gamma0."""
        if self.markovian_limit:
            raise ValueError("kappa is undefined in the Markovian limit")
        return math.sqrt(abs(2.0 * self.gamma0 * self.Gamma - self.Gamma**2))

    def branch(self) -> str:
        """One of 'markovian', 'oscillatory', 'critical', 'hyperbolic'."""
        if self.markovian_limit:
            return "markovian"
        if self.kappa <= CRITICAL_KAPPA_TOL * self.gamma0:
            return "critical"
        return "oscillatory" if self.Gamma < 2.0 * self.gamma0 else "hyperbolic"


def _check_time(t: float) -> None:
    if t < 0.0:
        raise ValueError(f"time must be nonnegative, got {t}")


def amplitude_factor(p: OpenSystemParams, t: float) -> float:
    """Signed coherence amplitude G_t; the excited population is G_t^2.

    G_t passes through zero in the oscillatory regime, flipping the sign of
    the coherences; the population factor is insensitive to the sign.
    """
    _check_time(t)
    branch = p.branch()
    if branch == "markovian":
        return math.exp(-0.5 * p.gamma0 * t)
    g, k = p.Gamma, p.kappa
    if branch == "critical":
        return math.exp(-0.5 * g * t) * (1.0 + 0.5 * g * t)
    if branch == "oscillatory":
        half = 0.5 * k * t
        return math.exp(-0.5 * g * t) * (math.cos(half) + (g / k) * math.sin(half))
    # hyperbolic: for small arguments keep cosh/sinh (the split form below
    # cancels badly when Gamma/kappa is huge near the critical point); for
    # large arguments expand into decaying exponentials (kappa < Gamma) to
    # avoid cosh overflow.
    half = 0.5 * k * t
    if half < 20.0:
        return math.exp(-0.5 * g * t) * (math.cosh(half) + (g / k) * math.sinh(half))
    up = math.exp(0.5 * (k - g) * t)
    down = math.exp(-0.5 * (k + g) * t)
    return 0.5 * ((1.0 + g / k) * up + (1.0 - g / k) * down)


def amplitude_factor_dot(p: OpenSystemParams, t: float) -> float:
    """Closed-form time derivative of the coherence amplitude G_t."""
    _check_time(t)
    branch = p.branch()
    if branch == "markovian":
        return -0.5 * p.gamma0 * math.exp(-0.5 * p.gamma0 * t)
    g, k = p.Gamma, p.kappa
    if branch == "critical":
        return -0.25 * g * g * t * math.exp(-0.5 * g * t)
    if branch == "oscillatory":
        return -(p.gamma0 * g / k) * math.exp(-0.5 * g * t) * math.sin(0.5 * k * t)
    half = 0.5 * k * t
    if half < 20.0:
        return -(p.gamma0 * g / k) * math.exp(-0.5 * g * t) * math.sinh(half)
    up = math.exp(0.5 * (k - g) * t)
    down = math.exp(-0.5 * (k + g) * t)
    return -(p.gamma0 * g / (2.0 * k)) * (up - down)


def population_factor(p: OpenSystemParams, t: float) -> float:
    """Excited-state survival factor P_t = G_t^2, in [0, 1]."""
    g = amplitude_factor(p, t)
    return min(g * g, 1.0)


def population_factor_dot(p: OpenSystemParams, t: float) -> float:
    """Closed-form dP/dt = 2 G_t dG/dt."""
    return 2.0 * amplitude_factor(p, t) * amplitude_factor_dot(p, t)


def population_complement(p: OpenSystemParams, t: float) -> float:
    """1 - P_t without cancellation near P_t = 1.

    Computed from expm1/log1p of the amplitude factor when P_t >= 1/2; the
    direct subtraction is already accurate below that.
    """
    _check_time(t)
    branch = p.branch()
    if branch == "markovian":
        return -math.expm1(-p.gamma0 * t)
    value = population_factor(p, t)
    if value < 0.5:
        return 1.0 - value
    g, k = p.Gamma, p.kappa
    # P >= 1/2 only happens while the bracket u = G exp(Gamma t / 2) stays
    # close to 1, where u - 1 is computed stably term by term.
    if branch == "critical":
        um1 = 0.5 * g * t
    elif branch == "oscillatory":
        quarter = 0.25 * k * t
        um1 = -2.0 * math.sin(quarter) ** 2 + (g / k) * math.sin(0.5 * k * t)
    else:
        quarter = 0.25 * k * t
        um1 = 2.0 * math.sinh(quarter) ** 2 + (g / k) * math.sinh(0.5 * k * t)
    log_p = -g * t + 2.0 * math.log1p(um1)
    return -math.expm1(log_p)


# ---------------------------------------------------------------------------
# Channels


def amplitude_damping_evolve(rho0: np.ndarray, P: float) -> np.ndarray:
    """Single-qubit amplitude damping at population factor P.

    Maps [[r11, r10], [r01, r00]] to [[r11 P, r10 sqrt(P)],
    [r01 sqrt(P), 1 - r11 P]]; trace-preserving and completely positive for
    P in [0, 1].
    """
    if not 0.0 <= P <= 1.0:
        raise ValueError(f"population factor must lie in [0, 1], got {P}")
    rho = np.asarray(rho0, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 state, got shape {rho.shape}")
    root = math.sqrt(P)
    return np.array(
        [
            [rho[0, 0] * P, rho[0, 1] * root],
            [rho[1, 0] * root, 1.0 - rho[0, 0] * P],
        ],
        dtype=complex,
    )


def _damping_elements(g: float) -> list[np.ndarray]:
    """Single-qubit operation elements at coherence amplitude g (P = g^2)."""
    keep = np.array([[g, 0.0], [0.0, 1.0]], dtype=complex)
    decay = np.array(
        [[0.0, 0.0], [math.sqrt(max(1.0 - g * g, 0.0)), 0.0]], dtype=complex
    )
    return [keep, decay]


def local_damping_evolve(rho0: np.ndarray, P: float, n: int = 1) -> np.ndarray:
    """Amplitude damping applied locally to each of n qubits (n in {1, 2})."""
    if n not in (1, 2):
        raise ValueError(f"local damping supports 1 or 2 qubits, got n = {n}")
    if not 0.0 <= P <= 1.0:
        raise ValueError(f"population factor must lie in [0, 1], got {P}")
    rho = np.asarray(rho0, dtype=complex)
    expected = 2**n
    if rho.shape != (expected, expected):
        raise ValueError(f"expected a {expected}x{expected} state for n = {n}")
    single = _damping_elements(math.sqrt(P))
    if n == 1:
        elements = single
    else:
        elements = [tensor(a, b) for a in single for b in single]
    out = np.zeros_like(rho)
    for e in elements:
        out += e @ rho @ e.conj().T
    return out


# ---------------------------------------------------------------------------
# Trajectories


def precession_trajectory(p: ClosedQubitParams, horizon: float = 50.0) -> Trajectory:
    """Pure-state precession alpha e^{-i omega t/2}|1> + beta e^{i omega t/2}|0>."""
    a, b, w = complex(p.alpha), complex(p.beta), p.omega

    def psi(t: float) -> np.ndarray:
        phase = np.exp(-0.5j * w * t)
        return np.array([a * phase, b / phase])

    def psi_dot(t: float) -> np.ndarray:
        phase = np.exp(-0.5j * w * t)
        return np.array([-0.5j * w * a * phase, 0.5j * w * b / phase])

    def state(t: float) -> np.ndarray:
        v = psi(t)
        return np.outer(v, v.conj())

    def derivative(t: float) -> np.ndarray:
        v, dv = psi(t), psi_dot(t)
        return np.outer(dv, v.conj()) + np.outer(v, dv.conj())

    return Trajectory(
        dim=2,
        horizon=horizon,
        state_at=state,
        derivative_at=derivative,
        params={"omega": w, "alpha_abs": abs(a), "beta_abs": abs(b)},
    )


def two_qubit_closed_trajectory(
    p: ClosedQubitParams, kind: str, horizon: float = 50.0
) -> Trajectory:
    """Two non-interacting precessing spins.

    ``kind='aligned'`` starts from alpha|11> + beta|00>, which accumulates the
    phases of both spins; ``kind='anti'`` starts from alpha|10> + beta|01>,
    whose components are degenerate in energy, so the state never moves.
    """
    a, b, w = complex(p.alpha), complex(p.beta), p.omega
    if kind == "aligned":

        def psi(t: float) -> np.ndarray:
            phase = np.exp(-1j * w * t)
            return np.array([a * phase, 0.0, 0.0, b / phase])

        def psi_dot(t: float) -> np.ndarray:
            phase = np.exp(-1j * w * t)
            return np.array([-1j * w * a * phase, 0.0, 0.0, 1j * w * b / phase])

        def state(t: float) -> np.ndarray:
            v = psi(t)
            return np.outer(v, v.conj())

        def derivative(t: float) -> np.ndarray:
            v, dv = psi(t), psi_dot(t)
            return np.outer(dv, v.conj()) + np.outer(v, dv.conj())

    elif kind == "anti":
        vec = np.array([0.0, a, b, 0.0], dtype=complex)
        frozen = np.outer(vec, vec.conj())
        zero = np.zeros((4, 4), dtype=complex)

        def state(t: float) -> np.ndarray:
            return frozen.copy()

        def derivative(t: float) -> np.ndarray:
            return zero.copy()

    else:
        raise ValueError(f"kind must be 'aligned' or 'anti', got '{kind}'")

    return Trajectory(
        dim=4,
        horizon=horizon,
        state_at=state,
        derivative_at=derivative,
        params={"omega": w, "alpha_abs": abs(a), "beta_abs": abs(b)},
    )


def _open_params_record(p: OpenSystemParams) -> dict[str, float]:
    record = {"alpha": p.alpha, "gamma0": p.gamma0}
    if p.markovian_limit:
        record["markovian_limit"] = 1.0
    else:
        record["Gamma_over_gamma0"] = p.Gamma / p.gamma0
    return record


def open_qubit_trajectory(
    p: OpenSystemParams, horizon: float | None = None
) -> Trajectory:
    """Amplitude-damped qubit starting from alpha|1> + sqrt(1-alpha^2)|0>.

    The state keeps the signed coherence amplitude G_t (the exact reduced
    dynamics), so the trajectory is smooth through the zeros of P_t; the
    unsigned channel ``amplitude_damping_evolve`` agrees with it wherever
    G_t >= 0. The speed limit at t = 0, where the evaluation is 0/0, is
    alpha^2 sqrt(Gamma gamma0 / 2); in the Markovian limit it diverges.
    """
    if horizon is None:
        horizon = 50.0 / p.gamma0
    a = p.alpha
    b = math.sqrt(1.0 - a * a)

    def state(t: float) -> np.ndarray:
        g = amplitude_factor(p, t)
        pop = g * g
        return np.array(
            [
                [a * a * pop, a * b * g],
                [a * b * g, 1.0 - a * a * pop],
            ],
            dtype=complex,
        )

    def derivative(t: float) -> np.ndarray:
        g = amplitude_factor(p, t)
        dg = amplitude_factor_dot(p, t)
        dpop = 2.0 * g * dg
        return np.array(
            [
                [a * a * dpop, a * b * dg],
                [a * b * dg, -a * a * dpop],
            ],
            dtype=complex,
        )

    if p.markovian_limit:
        limit = None
    else:
        limit = a * a * math.sqrt(0.5 * p.Gamma * p.gamma0)
    return Trajectory(
        dim=2,
        horizon=horizon,
        state_at=state,
        derivative_at=derivative,
        params=_open_params_record(p),
        speed_at_zero=limit,
        boundary_at_zero=True,
    )


def open_two_qubit_trajectory(
    p: OpenSystemParams, kind: str, horizon: float | None = None
) -> Trajectory:
    """Two qubits, each locally amplitude-damped by its own cavity.

    States are produced by the local operation elements
    (``local_damping_evolve``); the attached derivatives are the closed forms
    for the two supported initial states. ``kind='aligned'`` starts from
    alpha|11> + beta|00>; ``kind='anti'`` from alpha|10> + beta|01>, whose
    evolved state P_t|phi0><phi0| + (1-P_t)|00><00| has constant eigenvectors
    and an alpha-independent speed.
    """
    if horizon is None:
        horizon = 50.0 / p.gamma0
    a = p.alpha
    b = math.sqrt(1.0 - a * a)
    if kind == "aligned":
        vec = np.array([a, 0.0, 0.0, b], dtype=complex)
    elif kind == "anti":
        vec = np.array([0.0, a, b, 0.0], dtype=complex)
    else:
        raise ValueError(f"kind must be 'aligned' or 'anti', got '{kind}'")
    rho0 = np.outer(vec, vec.conj())

    def state(t: float) -> np.ndarray:
        return local_damping_evolve(rho0, population_factor(p, t), n=2)

    if kind == "aligned":

        def derivative(t: float) -> np.ndarray:
            pop = population_factor(p, t)
            dpop = population_factor_dot(p, t)
            middle = a * a * dpop * (1.0 - 2.0 * pop)
            out = np.zeros((4, 4), dtype=complex)
            out[0, 0] = 2.0 * a * a * pop * dpop
            out[1, 1] = middle
            out[2, 2] = middle
            out[3, 3] = -2.0 * a * a * dpop * (1.0 - pop)
            out[0, 3] = out[3, 0] = a * b * dpop
            return out

        limit = None if p.markovian_limit else a * math.sqrt(p.Gamma * p.gamma0)
    else:
        ground = np.zeros((4, 4), dtype=complex)
        ground[3, 3] = 1.0
        generator = rho0 - ground

        def derivative(t: float) -> np.ndarray:
            return population_factor_dot(p, t) * generator

        limit = None if p.markovian_limit else math.sqrt(0.5 * p.Gamma * p.gamma0)

    return Trajectory(
        dim=4,
        horizon=horizon,
        state_at=state,
        derivative_at=derivative,
        params=_open_params_record(p),
        speed_at_zero=limit,
        boundary_at_zero=True,
    )


# ---------------------------------------------------------------------------
# Analytic speeds


def open_qubit_speed_analytic(p: OpenSystemParams, t: float) -> float:
    """Closed-form speed of the damped qubit under the SLD metric.

    Evaluated as alpha |dG/dt| sqrt((1 - (1-alpha^2) P) / (1 - P)), which is
    the standard |dP/dt| form with the removable sqrt(P) singularity
    cancelled, so the zeros of P_t need no special handling. At t = 0 the
    limit alpha^2 sqrt(Gamma gamma0 / 2) is returned (infinite in the
    Markovian limit).
    """
    _check_time(t)
    a = p.alpha
    if a == 0.0:
        return 0.0
    if t == 0.0:
        if p.markovian_limit:
            return math.inf
        return a * a * math.sqrt(0.5 * p.Gamma * p.gamma0)
    pop = population_factor(p, t)
    comp = population_complement(p, t)
    dg = amplitude_factor_dot(p, t)
    return a * abs(dg) * math.sqrt((1.0 - (1.0 - a * a) * pop) / comp)


def open_two_qubit_speed_analytic(p: OpenSystemParams, t: float) -> float:
    """Closed-form speed of the locally damped aligned pair (SLD metric).

    Same sqrt(P) cancellation as the single-qubit form; the t = 0 limit is
    alpha sqrt(Gamma gamma0).
    """
    _check_time(t)
    a = p.alpha
    if a == 0.0:
        return 0.0
    if t == 0.0:
        if p.markovian_limit:
            return math.inf
        return a * math.sqrt(p.Gamma * p.gamma0)
    pop = population_factor(p, t)
    comp = population_complement(p, t)
    dg = amplitude_factor_dot(p, t)
    numerator = 1.0 - 2.0 * pop * comp
    denominator = 2.0 * comp * (1.0 - 2.0 * a * a * pop * comp)
    return 2.0 * a * abs(dg) * math.sqrt(numerator / denominator)


def markovian_two_qubit_speed(C: float, t: float) -> float:
    """Speed (in units of gamma0) of the aligned pair in the Markovian limit,
    parameterized by the initial concurrence C = 2 alpha sqrt(1 - alpha^2).

    S = (1/2) sqrt( x P (1 - 2P + 2P^2) / ((1-P) [1 - x P (1-P)]) ) with
    x = 1 - sqrt(1 - C^2) and P = exp(-t). Diverges at t = 0.
    """
    if not 0.0 <= C <= 1.0:
        raise ValueError(f"concurrence must lie in [0, 1], got {C}")
    _check_time(t)
    if C == 0.0:
        return 0.0
    if t == 0.0:
        raise DivergenceError(
            "the Markovian-limit speed is unbounded at t = 0 "
            "(the spectral width has been taken to infinity)"
        )
    x = C * C / (1.0 + math.sqrt(1.0 - C * C))
    pop = math.exp(-t)
    comp = -math.expm1(-t)
    numerator = x * pop * (1.0 - 2.0 * pop * comp)
    denominator = comp * (1.0 - x * pop * comp)
    return 0.5 * math.sqrt(numerator / denominator)


def alpha_from_concurrence(C: float) -> float:
    """Excited amplitude (<= 1/sqrt(2) branch) of an aligned pair with
    initial concurrence C = 2 alpha sqrt(1 - alpha^2)."""
    if not 0.0 <= C <= 1.0:
        raise ValueError(f"concurrence must lie in [0, 1], got {C}")
    x = C * C / (1.0 + math.sqrt(1.0 - C * C))
    return math.sqrt(0.5 * x)


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density operator.

    C = max(0, l1 - l2 - l3 - l4) with l_i the descending square roots of the
    eigenvalues of rho (sy x sy) conj(rho) (sy x sy). Those roots equal the
    singular values of sqrt(rho_tilde) sqrt(rho), which is how they are
    computed here (no precision loss from squaring).
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"concurrence needs a two-qubit (4x4) state, got {rho.shape}")
    assert_density(rho)
    values, vectors = np.linalg.eigh(rho)
    root = (vectors * np.sqrt(np.clip(values, 0.0, None))) @ vectors.conj().T
    flip = tensor(PAULI_Y, PAULI_Y)
    root_tilde = flip @ root.conj() @ flip
    lam = np.linalg.svd(root_tilde @ root, compute_uv=False)
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


# ---------------------------------------------------------------------------
# Registry


def trajectory_from_key(
    key: str,
    *,
    alpha: float = 1.0,
    omega: float = 1.0,
    gamma0: float = 1.0,
    Gamma_over_gamma0: float | None = None,
    markovian_limit: bool = False,
    horizon: float | None = None,
) -> Trajectory:
    """Build a model trajectory from its string key and real parameters.

    Open models need either ``Gamma_over_gamma0`` or ``markovian_limit``.
    """
    if key not in MODEL_KEYS:
        raise ValueError(
            f"unknown model '{key}'; valid keys: {', '.join(MODEL_KEYS)}"
        )
    if key.startswith("closed"):
        params = ClosedQubitParams.from_alpha(alpha, omega)
        h = 50.0 / omega if horizon is None else horizon
        if key == "closed-1q":
            return precession_trajectory(params, horizon=h)
        kind = "aligned" if key.endswith("aligned") else "anti"
        return two_qubit_closed_trajectory(params, kind, horizon=h)
    if Gamma_over_gamma0 is None and not markovian_limit:
        raise ValueError(
            f"model '{key}' needs Gamma_over_gamma0 or markovian_limit"
        )
    open_params = OpenSystemParams(
        alpha=alpha,
        gamma0=gamma0,
        Gamma=None if markovian_limit else Gamma_over_gamma0 * gamma0,
        markovian_limit=markovian_limit,
    )
    if key == "open-1q":
        return open_qubit_trajectory(open_params, horizon=horizon)
    kind = "aligned" if key.endswith("aligned") else "anti"
    return open_two_qubit_trajectory(open_params, kind, horizon=horizon)
