"""Memory regions, speedup regions and regime classification for the
Lorentzian-bath damped qubit.

All times here are dimensionless (gamma0 * t). In the memory regime
(Gamma / gamma0 < 2) the population factor P_t oscillates: it touches zero at

    tau_n = 2 [n pi - arctan(kappa / Gamma)] / kappa

and peaks at tau_n' = 2 n pi / kappa, so sqrt(P_t) - the memory witness -
increases exactly on (tau_n, tau_n'). Each memory interval hands over to a
longitudinal-speedup interval (tau_n', tau_n'') whose right endpoint solves
the transcendental equation

    Gamma tan(kappa t / 2) = kappa tanh(Gamma t / 2),

found by bisection on the tangent branch (2 n pi / kappa, (2n+1) pi / kappa).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import RootBracketError
from .models import OpenSystemParams, population_factor

MARKOVIAN_THRESHOLD = 2.0
CRITICAL_RATIO_TOL = 1e-12
ROOT_RESIDUAL_TOL = 1e-10
_POLE_PAD = 1e-9
_MAX_BISECTIONS = 200


class Regime(enum.Enum):
    MARKOVIAN = "markovian"
    NON_MARKOVIAN = "non_markovian"
    CRITICAL = "critical"


@dataclass(frozen=True)
class RegionReport:
    """Memory intervals (tau_n, tau_n') and speedup intervals (tau_n', tau_n'')
    in gamma0*t units; both empty outside the non-Markovian regime."""

    regime: Regime
    memory_intervals: tuple[tuple[float, float], ...]
    speedup_intervals: tuple[tuple[float, float], ...]
    n_max: int


def regime_classify(gamma_ratio: float) -> Regime:
    """Classify the bath by its width ratio Gamma / gamma0.

    Above 2 the environment is memoryless (Markovian), below 2 it carries
    memory; the boundary itself is reported as critical.
    """
    if not gamma_ratio > 0.0:
        raise ValueError(f"Gamma / gamma0 must be positive, got {gamma_ratio}")
    if abs(gamma_ratio - MARKOVIAN_THRESHOLD) <= CRITICAL_RATIO_TOL:
        return Regime.CRITICAL
    if gamma_ratio > MARKOVIAN_THRESHOLD:
        return Regime.MARKOVIAN
    return Regime.NON_MARKOVIAN


def _classify_params(p: OpenSystemParams) -> Regime:
    if p.markovian_limit:
        return Regime.MARKOVIAN
    return regime_classify(p.Gamma / p.gamma0)


def memory_witness(p: OpenSystemParams, t: float) -> float:
    """sqrt(P_t); the environment feeds information back wherever this grows."""
    return math.sqrt(population_factor(p, t))


def _oscillation_rates(p: OpenSystemParams) -> tuple[float, float]:
    """(Gamma, kappa) in units of gamma0, for the non-Markovian regime only."""
    regime = _classify_params(p)
    if regime is not Regime.NON_MARKOVIAN:
        raise ValueError(
            f"memory/speedup boundaries exist only in the non-Markovian regime "
            f"(Gamma / gamma0 < 2); got the {regime.value} regime"
        )
    ratio = p.Gamma / p.gamma0
    return ratio, math.sqrt(2.0 * ratio - ratio * ratio)


def memory_boundaries(p: OpenSystemParams, n_max: int) -> list[tuple[float, float]]:
    """First ``n_max`` memory intervals (tau_n, tau_n') in gamma0*t units."""
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    gamma, kappa = _oscillation_rates(p)
    offset = math.atan(kappa / gamma)
    out = []
    for n in range(1, n_max + 1):
        tau = 2.0 * (n * math.pi - offset) / kappa
        tau_prime = 2.0 * n * math.pi / kappa
        out.append((tau, tau_prime))
    return out


def speedup_equation(p: OpenSystemParams, t: float) -> float:
    """Residual Gamma tan(kappa t / 2) - kappa tanh(Gamma t / 2) at gamma0*t = t."""
    gamma, kappa = _oscillation_rates(p)
    return gamma * math.tan(0.5 * kappa * t) - kappa * math.tanh(0.5 * gamma * t)


def _bisect_speedup_end(p: OpenSystemParams, n: int) -> float:
    _, kappa = _oscillation_rates(p)
    low = 2.0 * n * math.pi / kappa
    high = (2.0 * n + 1.0) * math.pi / kappa - _POLE_PAD
    g_low = speedup_equation(p, low)
    g_high = speedup_equation(p, high)
    if g_low >= 0.0 or g_high <= 0.0:
        raise RootBracketError(
            f"no sign change for the speedup-end equation on "
            f"({low:.6g}, {high:.6g}): g = ({g_low:.3e}, {g_high:.3e})"
        )
    for _ in range(_MAX_BISECTIONS):
        mid = 0.5 * (low + high)
        g_mid = speedup_equation(p, mid)
        if abs(g_mid) <= ROOT_RESIDUAL_TOL:
            return mid
        if (g_mid < 0.0) == (g_low < 0.0):
            low, g_low = mid, g_mid
        else:
            high = mid
    raise RootBracketError(
        f"bisection failed to reach residual {ROOT_RESIDUAL_TOL:.1e} on "
        f"branch n = {n}"
    )


def speedup_boundaries(p: OpenSystemParams, n_max: int) -> list[tuple[float, float]]:
    """First ``n_max`` speedup intervals (tau_n', tau_n'') in gamma0*t units.

    Each right endpoint is bisected to |residual| <= ROOT_RESIDUAL_TOL on the
    branch where the tangent rises from zero toward its pole.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be at least 1, got {n_max}")
    _, kappa = _oscillation_rates(p)
    out = []
    for n in range(1, n_max + 1):
        tau_prime = 2.0 * n * math.pi / kappa
        out.append((tau_prime, _bisect_speedup_end(p, n)))
    return out


def region_report(p: OpenSystemParams, n_max: int) -> RegionReport:
    """Regime plus the first ``n_max`` memory and speedup intervals.

    Markovian and critical parameters yield empty interval lists (there is no
    oscillation to bound); so does ``n_max = 0``.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be nonnegative, got {n_max}")
    regime = _classify_params(p)
    if regime is not Regime.NON_MARKOVIAN or n_max == 0:
        return RegionReport(regime, (), (), n_max)
    memory = tuple(memory_boundaries(p, n_max))
    speedup = tuple(speedup_boundaries(p, n_max))
    return RegionReport(regime, memory, speedup, n_max)
