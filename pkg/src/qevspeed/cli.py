"""Command-line front end: speed curves, figure data, region reports and
speedup-detection sweeps, emitted as self-describing CSV or JSON.

Every value in the output is reproducible by calling the library directly
with the parameters echoed in the header block; the CLI only arranges grids
and serialization. Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import Regime, memory_witness, region_report, speedup_equation
from .errors import MetricRejectionError, NumericalFailure
from .metrics import MetricKind, resolve_metric
from .models import (
    MODEL_KEYS,
    OpenSystemParams,
    alpha_from_concurrence,
    markovian_two_qubit_speed,
    trajectory_from_key,
)
from .speed import Trajectory, speed_at, speedup_measure

SWEEP_PARAMS = ("t", "alpha", "C", "Omega", "Gamma_over_gamma0")

_CONFIG_KEYS = {
    "model",
    "metric",
    "alpha",
    "omega",
    "gamma_ratio",
    "markovian_limit",
    "tmin",
    "tmax",
    "points",
    "time",
    "sweep",
    "n_max",
    "format",
    "out",
}


class UsageError(ValueError):
    """Bad command-line or config-file input."""


@dataclass(frozen=True)
class FigureSpec:
    """Bound parameters and grid for one reproducible data set."""

    figure_id: str
    kind: str  # 'time_curve' | 'omega_sweep' | 'concurrence_sweep'
    model: str
    alpha: float
    gamma_ratio: float | None = None
    markovian_limit: bool = False
    fixed_time: float | None = None
    grid: tuple[float, float, int] = (1e-4, 30.0, 400)


_SQRT_HALF = 1.0 / math.sqrt(2.0)

FIGURES: dict[str, FigureSpec] = {
    "fig1a": FigureSpec("fig1a", "time_curve", "open-1q", 1.0, gamma_ratio=10.0),
    "fig1b": FigureSpec("fig1b", "time_curve", "open-1q", 1.0, gamma_ratio=0.1),
    "fig2a": FigureSpec(
        "fig2a", "omega_sweep", "open-1q", 1.0, fixed_time=0.0, grid=(0.02, 3.0, 300)
    ),
    "fig2b": FigureSpec(
        "fig2b", "omega_sweep", "open-1q", 1.0, fixed_time=1.0, grid=(0.02, 3.0, 300)
    ),
    "fig2c": FigureSpec(
        "fig2c", "omega_sweep", "open-1q", 1.0, fixed_time=5.0, grid=(0.02, 3.0, 300)
    ),
    "fig2d": FigureSpec(
        "fig2d", "omega_sweep", "open-1q", 1.0, fixed_time=10.0, grid=(0.02, 3.0, 300)
    ),
    "fig3a": FigureSpec(
        "fig3a", "time_curve", "open-2q-aligned", _SQRT_HALF, gamma_ratio=10.0
    ),
    "fig3b": FigureSpec(
        "fig3b", "time_curve", "open-2q-aligned", _SQRT_HALF, gamma_ratio=0.1
    ),
    "fig4a": FigureSpec(
        "fig4a",
        "concurrence_sweep",
        "open-2q-aligned",
        _SQRT_HALF,
        markovian_limit=True,
        fixed_time=1.0,
        grid=(0.005, 0.999, 200),
    ),
    "fig4b": FigureSpec(
        "fig4b",
        "concurrence_sweep",
        "open-2q-aligned",
        _SQRT_HALF,
        markovian_limit=True,
        fixed_time=10.0,
        grid=(0.005, 0.999, 200),
    ),
}


@dataclass
class RunConfig:
    command: str
    model: str | None = None
    metric: str = "sld"
    alpha: float = 1.0
    omega: float = 1.0
    gamma_ratio: float | None = None
    markovian_limit: bool = False
    tmin: float = 1e-4
    tmax: float = 10.0
    points: int | None = None  # command-specific default when unset
    time: float = 1.0
    sweep: str | None = None
    n_max: int = 1
    figure_id: str | None = None
    fmt: str = "csv"
    out: str | None = None


@dataclass
class TableResult:
    header: list[tuple[str, str]]
    columns: list[str]
    rows: list[list[float]]
    notes: list[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Configuration


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qevspeed",
        description="Quantum evolution speed, speedup detection and "
        "memory-region analysis.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp: argparse.ArgumentParser, with_model: bool = True) -> None:
        if with_model:
            sp.add_argument("--model", help=f"one of: {', '.join(MODEL_KEYS)}")
            sp.add_argument("--metric", help="sld | wy (default sld)")
            sp.add_argument("--alpha", type=float, help="initial excited amplitude")
            sp.add_argument("--omega", type=float, help="closed-model level splitting")
        sp.add_argument(
            "--gamma-ratio", type=float, dest="gamma_ratio", help="Gamma / gamma0"
        )
        sp.add_argument(
            "--markovian-limit",
            action="store_const",
            const=True,
            dest="markovian_limit",
            help="take the spectral width to infinity (P_t = exp(-gamma0 t))",
        )
        sp.add_argument("--config", help="JSON file with the same keys; flags win")
        sp.add_argument("--format", dest="fmt", choices=("csv", "json"))
        sp.add_argument("--out", help="output path (default: stdout)")

    sp = sub.add_parser("speed", help="sample S and dS/dt over a time grid")
    add_common(sp)
    sp.add_argument("--tmin", type=float)
    sp.add_argument("--tmax", type=float)
    sp.add_argument("--points", type=int)

    sp = sub.add_parser("figure", help="emit the data behind a standard figure")
    sp.add_argument("figure_id", help=f"one of: {', '.join(sorted(FIGURES))}")
    sp.add_argument("--metric", help="sld | wy (default sld)")
    sp.add_argument("--points", type=int, help="override the default grid size")
    sp.add_argument("--config", help="JSON file with the same keys; flags win")
    sp.add_argument("--format", dest="fmt", choices=("csv", "json"))
    sp.add_argument("--out", help="output path (default: stdout)")

    sp = sub.add_parser("regions", help="memory and speedup interval report")
    add_common(sp, with_model=False)
    sp.add_argument("--n-max", type=int, dest="n_max", help="intervals to list")

    sp = sub.add_parser("detect", help="sweep a parameter and flag dS/dxi > 0")
    add_common(sp)
    sp.add_argument(
        "--sweep", help="parameter sweep as <param>:<min>:<max>:<points>, "
        f"param in {{{', '.join(SWEEP_PARAMS)}}}"
    )
    sp.add_argument(
        "--time", type=float, help="evaluation time for transverse sweeps"
    )

    return parser


def _load_config_file(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(data) - _CONFIG_KEYS
    if unknown:
        raise UsageError(
            f"unknown config keys: {', '.join(sorted(unknown))}; "
            f"valid keys: {', '.join(sorted(_CONFIG_KEYS))}"
        )
    return data


def merge_config(args: argparse.Namespace) -> RunConfig:
    """Resolve precedence: command-line flag, then config file, then default."""
    file_values = _load_config_file(args.config) if getattr(args, "config", None) else {}
    config = RunConfig(command=args.command)
    mapping = {
        "model": "model",
        "metric": "metric",
        "alpha": "alpha",
        "omega": "omega",
        "gamma_ratio": "gamma_ratio",
        "markovian_limit": "markovian_limit",
        "tmin": "tmin",
        "tmax": "tmax",
        "points": "points",
        "time": "time",
        "sweep": "sweep",
        "n_max": "n_max",
        "format": "fmt",
        "out": "out",
    }
    for key, attr in mapping.items():
        flag = getattr(args, attr, None)
        if flag is not None:
            setattr(config, attr, flag)
        elif key in file_values:
            setattr(config, attr, file_values[key])
    if args.command == "figure":
        config.figure_id = args.figure_id
    return config


# ---------------------------------------------------------------------------
# Command implementations


def _resolve_metric(config: RunConfig) -> MetricKind:
    try:
        return resolve_metric(config.metric)
    except MetricRejectionError as exc:
        raise UsageError(str(exc)) from exc


def _build_trajectory(config: RunConfig, **overrides) -> Trajectory:
    if config.model is None:
        raise UsageError(f"--model is required; valid keys: {', '.join(MODEL_KEYS)}")
    kwargs = dict(
        alpha=config.alpha,
        omega=config.omega,
        Gamma_over_gamma0=config.gamma_ratio,
        markovian_limit=config.markovian_limit,
    )
    kwargs.update(overrides)
    try:
        return trajectory_from_key(config.model, **kwargs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _open_params(config: RunConfig) -> OpenSystemParams:
    if config.markovian_limit:
        return OpenSystemParams(alpha=config.alpha, markovian_limit=True)
    if config.gamma_ratio is None:
        raise UsageError("open-system analysis needs --gamma-ratio or --markovian-limit")
    try:
        return OpenSystemParams(alpha=config.alpha, Gamma=config.gamma_ratio)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _base_header(config: RunConfig) -> list[tuple[str, str]]:
    header = [("artifact", f"qevspeed v{__version__}"), ("command", config.command)]
    return header


def _time_grid(config: RunConfig) -> np.ndarray:
    points = 200 if config.points is None else config.points
    if points < 2:
        raise UsageError(f"grid needs at least 2 points, got {points}")
    if not config.tmin < config.tmax:
        raise UsageError(f"tmin must be below tmax, got [{config.tmin}, {config.tmax}]")
    return np.linspace(config.tmin, config.tmax, points)


def run_speed(config: RunConfig) -> TableResult:
    metric = _resolve_metric(config)
    traj = _build_trajectory(config, horizon=max(50.0, config.tmax))
    grid = _time_grid(config)
    if grid[0] < 0.0:
        raise UsageError("tmin must be nonnegative")

    notes: list[str] = []
    speeds = np.full(grid.shape, math.nan)
    for i, t in enumerate(grid):
        try:
            speeds[i] = speed_at(traj, float(t), metric)
        except NumericalFailure as exc:
            notes.append(f"skipped t={t:.12g}: {exc}")
    slopes = np.full(grid.shape, math.nan)
    if grid.size >= 2:
        slopes[0] = (speeds[1] - speeds[0]) / (grid[1] - grid[0])
        slopes[-1] = (speeds[-1] - speeds[-2]) / (grid[-1] - grid[-2])
    if grid.size > 2:
        slopes[1:-1] = (speeds[2:] - speeds[:-2]) / (grid[2:] - grid[:-2])

    header = _base_header(config)
    header.append(("model", config.model or ""))
    header.append(("metric", metric.value))
    for key, value in sorted(traj.params.items()):
        header.append((key, _format_value(value)))
    header.append(
        ("grid", f"tmin={config.tmin:.12g} tmax={config.tmax:.12g} points={grid.size}")
    )
    columns = ["t", "S", "dS_dt"]
    rows = [[float(t), float(s), float(d)] for t, s, d in zip(grid, speeds, slopes)]
    if traj.speed_at_zero is not None:
        columns.append("S_over_S0")
        s0 = traj.speed_at_zero
        for row, s in zip(rows, speeds):
            row.append(float(s / s0))
    return TableResult(header, columns, rows, notes)


def run_figure(config: RunConfig) -> TableResult:
    if config.figure_id not in FIGURES:
        raise UsageError(
            f"unknown figure '{config.figure_id}'; "
            f"valid ids: {', '.join(sorted(FIGURES))}"
        )
    spec = FIGURES[config.figure_id]
    metric = _resolve_metric(config)
    lo, hi, default_points = spec.grid
    points = default_points if config.points is None else config.points
    if points < 2:
        raise UsageError(f"grid needs at least 2 points, got {points}")
    grid = np.linspace(lo, hi, points)

    header = _base_header(config)
    header.append(("figure", spec.figure_id))
    header.append(("model", spec.model))
    header.append(("metric", metric.value))
    header.append(("alpha", _format_value(spec.alpha)))
    if spec.markovian_limit:
        header.append(("markovian_limit", "true"))
    if spec.gamma_ratio is not None:
        header.append(("Gamma_over_gamma0", _format_value(spec.gamma_ratio)))
    if spec.fixed_time is not None:
        header.append(("gamma0_t", _format_value(spec.fixed_time)))
    header.append(("grid", f"min={lo:.12g} max={hi:.12g} points={points}"))

    if spec.kind == "time_curve":
        traj = trajectory_from_key(
            spec.model, alpha=spec.alpha, Gamma_over_gamma0=spec.gamma_ratio,
            horizon=max(50.0, hi + 1.0),
        )
        s0 = traj.speed_at_zero
        with_witness = spec.model == "open-1q"
        if with_witness:
            witness_params = OpenSystemParams(alpha=spec.alpha, Gamma=spec.gamma_ratio)
        rows = []
        for t in grid:
            t = float(t)
            s = speed_at(traj, t, metric)
            slope = speedup_measure(lambda x: speed_at(traj, x, metric), t)
            row = [t, s / s0]
            if with_witness:
                row.append(memory_witness(witness_params, t))
            row.append(slope / s0)
            rows.append(row)
        columns = ["t", "S_over_S0"]
        if with_witness:
            columns.append("sqrt_P")
        columns.append("dS_dt_over_S0")
        return TableResult(header, columns, rows)

    if spec.kind == "omega_sweep":
        t_fix = spec.fixed_time

        def speed_of_omega(omega_ratio: float) -> float:
            traj = trajectory_from_key(
                spec.model, alpha=spec.alpha, Gamma_over_gamma0=1.0 / omega_ratio
            )
            return speed_at(traj, t_fix, metric)

        rows = []
        for omega_ratio in grid:
            omega_ratio = float(omega_ratio)
            s = speed_of_omega(omega_ratio)
            slope = speedup_measure(speed_of_omega, omega_ratio)
            rows.append([omega_ratio, s, slope, 1.0 if omega_ratio < 0.5 else 0.0])
        return TableResult(header, ["Omega", "S", "dS_dOmega", "markovian_band"], rows)

    # concurrence sweep in the Markovian limit
    t_fix = spec.fixed_time
    rows = []
    for c in grid:
        c = float(c)
        s = markovian_two_qubit_speed(c, t_fix)
        slope = speedup_measure(lambda x: markovian_two_qubit_speed(x, t_fix), c)
        rows.append([c, s, slope])
    return TableResult(header, ["C", "S_over_gamma0", "dS_dC_over_gamma0"], rows)


def run_regions(config: RunConfig) -> TableResult:
    if config.n_max < 0:
        raise UsageError(f"--n-max must be nonnegative, got {config.n_max}")
    params = _open_params(config)
    report = region_report(params, config.n_max)

    header = _base_header(config)
    if params.markovian_limit:
        header.append(("markovian_limit", "true"))
    else:
        header.append(("Gamma_over_gamma0", _format_value(params.Gamma / params.gamma0)))
    header.append(("regime", report.regime.value))
    header.append(("n_max", str(config.n_max)))

    columns = ["n", "tau_n", "tau_n_prime", "tau_n_dprime", "residual"]
    rows = []
    for i, (memory, speedup) in enumerate(
        zip(report.memory_intervals, report.speedup_intervals), start=1
    ):
        tau, tau_prime = memory
        _, tau_dprime = speedup
        rows.append(
            [float(i), tau, tau_prime, tau_dprime, speedup_equation(params, tau_dprime)]
        )
    notes = []
    if report.regime is not Regime.NON_MARKOVIAN:
        notes.append(f"{report.regime.value} regime: no memory or speedup intervals")
    return TableResult(header, columns, rows, notes)


def _parse_sweep(sweep: str | None) -> tuple[str, float, float, int]:
    if not sweep:
        raise UsageError("detect needs --sweep <param>:<min>:<max>:<points>")
    parts = sweep.split(":")
    if len(parts) != 4:
        raise UsageError(f"malformed sweep '{sweep}'; expected <param>:<min>:<max>:<points>")
    name, lo_s, hi_s, n_s = parts
    if name not in SWEEP_PARAMS:
        raise UsageError(
            f"unknown sweep parameter '{name}'; valid: {', '.join(SWEEP_PARAMS)}"
        )
    try:
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
    except ValueError as exc:
        raise UsageError(f"malformed sweep '{sweep}': {exc}") from exc
    if n < 2:
        raise UsageError(f"sweep needs at least 2 points, got {n}")
    if not lo < hi:
        raise UsageError(f"sweep min must be below max, got [{lo}, {hi}]")
    return name, lo, hi, n


def _sweep_speed_function(config: RunConfig, name: str, metric: MetricKind):
    """Speed as a function of the swept parameter, all else fixed."""
    t_eval = config.time
    margin = 2e-4  # room for the central-difference probes

    if name == "t":
        traj = _build_trajectory(config, horizon=max(50.0, t_eval))
        return lambda t: speed_at(traj, t, metric), "longitudinal"

    if name == "alpha":

        def f(alpha: float) -> float:
            if not 0.0 <= alpha <= 1.0:
                raise UsageError(
                    f"alpha sweep left [0, 1] at {alpha:.6g}; keep the grid "
                    f"inside [{margin}, {1 - margin}]"
                )
            return speed_at(_build_trajectory(config, alpha=alpha), t_eval, metric)

        return f, "transverse"

    if name == "C":
        if config.model not in (
            "closed-2q-aligned",
            "closed-2q-anti",
            "open-2q-aligned",
            "open-2q-anti",
        ):
            raise UsageError(f"concurrence sweep needs a two-qubit model, got '{config.model}'")

        def f(c: float) -> float:
            if not 0.0 <= c <= 1.0:
                raise UsageError(
                    f"C sweep left [0, 1] at {c:.6g}; keep the grid inside "
                    f"[{margin}, {1 - margin}]"
                )
            alpha = alpha_from_concurrence(c)
            return speed_at(_build_trajectory(config, alpha=alpha), t_eval, metric)

        return f, "transverse"

    if config.model is None or config.model.startswith("closed"):
        raise UsageError(f"sweep '{name}' needs an open-system model, got '{config.model}'")
    if config.markovian_limit:
        raise UsageError(
            f"sweep '{name}' varies the spectral width; drop --markovian-limit"
        )

    if name == "Omega":

        def f(omega_ratio: float) -> float:
            if omega_ratio <= 0.0:
                raise UsageError(f"Omega must stay positive, got {omega_ratio:.6g}")
            return speed_at(
                _build_trajectory(config, Gamma_over_gamma0=1.0 / omega_ratio),
                t_eval,
                metric,
            )

        return f, "transverse"

    def f(ratio: float) -> float:
        if ratio <= 0.0:
            raise UsageError(f"Gamma/gamma0 must stay positive, got {ratio:.6g}")
        return speed_at(
            _build_trajectory(config, Gamma_over_gamma0=ratio), t_eval, metric
        )

    return f, "transverse"


def run_detect(config: RunConfig) -> TableResult:
    metric = _resolve_metric(config)
    name, lo, hi, n = _parse_sweep(config.sweep)
    speed_of, classification = _sweep_speed_function(config, name, metric)
    grid = np.linspace(lo, hi, n)

    header = _base_header(config)
    header.append(("model", config.model or ""))
    header.append(("metric", metric.value))
    header.append(("classification", classification))
    header.append(("sweep", f"{name}:{lo:.12g}:{hi:.12g}:{n}"))
    if name != "t":
        header.append(("gamma0_t", _format_value(config.time)))
    if config.markovian_limit:
        header.append(("markovian_limit", "true"))
    elif config.gamma_ratio is not None and name not in ("Omega", "Gamma_over_gamma0"):
        header.append(("Gamma_over_gamma0", _format_value(config.gamma_ratio)))
    if name != "alpha":
        header.append(("alpha", _format_value(config.alpha)))

    rows = []
    for xi in grid:
        xi = float(xi)
        s = speed_of(xi)
        slope = speedup_measure(speed_of, xi)
        rows.append([xi, s, slope, 1.0 if slope > 0.0 else 0.0])
    return TableResult(header, [name, "S", f"dS_d{name}", "speedup"], rows)


# ---------------------------------------------------------------------------
# Serialization


def _format_value(value) -> str:
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def render_csv(result: TableResult) -> str:
    lines = [f"# {key}: {value}" for key, value in result.header]
    lines.extend(f"# note: {note}" for note in result.notes)
    lines.append(",".join(result.columns))
    for row in result.rows:
        lines.append(",".join(_format_value(float(v)) for v in row))
    return "\n".join(lines) + "\n"


def render_json(result: TableResult) -> str:
    def rounded(value: float) -> float:
        return float(f"{float(value):.12g}")

    payload = {
        "config": {key: value for key, value in result.header},
        "columns": result.columns,
        "rows": [[rounded(v) for v in row] for row in result.rows],
        "notes": result.notes,
    }
    return json.dumps(payload, indent=2) + "\n"


_RUNNERS = {
    "speed": run_speed,
    "figure": run_figure,
    "regions": run_regions,
    "detect": run_detect,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = merge_config(args)
        if config.fmt not in ("csv", "json"):
            raise UsageError(f"unknown format '{config.fmt}'; use csv or json")
        result = _RUNNERS[config.command](config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MetricRejectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    text = render_csv(result) if config.fmt == "csv" else render_json(result)
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
