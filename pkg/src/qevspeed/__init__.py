"""Instantaneous speed of quantum evolution on the density-operator manifold.

The speed is measured with boundary-extendable monotone Riemannian metrics
(symmetric logarithmic derivative or Wigner-Yanase); its parameter
derivatives detect longitudinal (in time) and transverse (in the initial
conditions) dynamical speedup, for both closed precession models and
amplitude-damped open systems with a Lorentzian bath.
"""

__version__ = "0.1.0"

from .analysis import (
    Regime,
    RegionReport,
    memory_boundaries,
    memory_witness,
    regime_classify,
    region_report,
    speedup_boundaries,
    speedup_equation,
)
from .errors import (
    BoundarySingularityError,
    DegenerateSpectrumError,
    DivergenceError,
    MetricRejectionError,
    NumericalFailure,
    RankIncreaseError,
    RootBracketError,
)
from .linalg import EigenSystem, eigh, hermitian_check, hs_inner, tensor
from .metrics import MetricKind, mc_function, pure_state_speed, resolve_metric
from .models import (
    MODEL_KEYS,
    ClosedQubitParams,
    OpenSystemParams,
    alpha_from_concurrence,
    amplitude_damping_evolve,
    amplitude_factor,
    amplitude_factor_dot,
    concurrence,
    local_damping_evolve,
    markovian_two_qubit_speed,
    open_qubit_speed_analytic,
    open_qubit_trajectory,
    open_two_qubit_speed_analytic,
    open_two_qubit_trajectory,
    population_complement,
    population_factor,
    population_factor_dot,
    precession_trajectory,
    trajectory_from_key,
    two_qubit_closed_trajectory,
)
from .speed import (
    SpeedCurve,
    Trajectory,
    rho_dot,
    speed_at,
    speed_curve,
    speed_spectral_form,
    speedup_measure,
)

__all__ = [
    "__version__",
    "Regime",
    "RegionReport",
    "memory_boundaries",
    "memory_witness",
    "regime_classify",
    "region_report",
    "speedup_boundaries",
    "speedup_equation",
    "BoundarySingularityError",
    "DegenerateSpectrumError",
    "DivergenceError",
    "MetricRejectionError",
    "NumericalFailure",
    "RankIncreaseError",
    "RootBracketError",
    "EigenSystem",
    "eigh",
    "hermitian_check",
    "hs_inner",
    "tensor",
    "MetricKind",
    "mc_function",
    "pure_state_speed",
    "resolve_metric",
    "MODEL_KEYS",
    "ClosedQubitParams",
    "OpenSystemParams",
    "alpha_from_concurrence",
    "amplitude_damping_evolve",
    "amplitude_factor",
    "amplitude_factor_dot",
    "concurrence",
    "local_damping_evolve",
    "markovian_two_qubit_speed",
    "open_qubit_speed_analytic",
    "open_qubit_trajectory",
    "open_two_qubit_speed_analytic",
    "open_two_qubit_trajectory",
    "population_complement",
    "population_factor",
    "population_factor_dot",
    "precession_trajectory",
    "trajectory_from_key",
    "two_qubit_closed_trajectory",
    "SpeedCurve",
    "Trajectory",
    "rho_dot",
    "speed_at",
    "speed_curve",
    "speed_spectral_form",
    "speedup_measure",
]
