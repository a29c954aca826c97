"""Sweep orchestration and result emission.

A sweep varies one axis (element count, user count or transmit power) over a
grid and runs the Monte Carlo link simulation for every configured
system/scheme combination at each point.  Points are independent, so they may
be distributed over a process pool; per-trial seeds are derived from
(master seed, point index, trial index), which makes the emitted table
byte-identical for a given configuration and seed under any worker count.
"""

from __future__ import annotations

import csv
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .channel import LargeScaleProfile
from .config import Config
from .errors import ConfigError, DomainError, RaqsimError
from .linksim import ergodic_rates_mc, mmimo_scenario, raq_scenario
from .rates import MMIMO, MRC, RAQ, ZF

AXIS_ELEMENTS = "M"
AXIS_USERS = "K"
AXIS_POWER = "P_s"

_COMBO_ORDER = ((RAQ, MRC), (RAQ, ZF), (MMIMO, MRC), (MMIMO, ZF))


@dataclass(frozen=True)
class SweepSpec:
    """One figure campaign: the axis, its grid and the Monte Carlo budget."""

    axis: str
    grid: tuple
    trials: int
    master_seed: int

    def __post_init__(self):
        if self.axis not in (AXIS_ELEMENTS, AXIS_USERS, AXIS_POWER):
            raise ConfigError(f"unknown sweep axis {self.axis!r}")
        grid = tuple(self.grid)
        object.__setattr__(self, "grid", grid)
        if not grid:
            raise ConfigError("sweep grid must not be empty")
        if list(grid) != sorted(grid):
            raise ConfigError("sweep grid must be sorted ascending")
        if self.trials < 1:
            raise ConfigError("sweep needs at least one trial per point")
        if self.axis in (AXIS_ELEMENTS, AXIS_USERS):
            if any(int(v) != v or v < 1 for v in grid):
                raise ConfigError(f"{self.axis} grid values must be positive integers")


PRESETS = {
    "fig-M": lambda: SweepSpec(AXIS_ELEMENTS, tuple(range(50, 501, 50)), 500, 0),
    "fig-K": lambda: SweepSpec(AXIS_USERS, tuple(range(1, 31)), 500, 0),
    "fig-P": lambda: SweepSpec(AXIS_POWER, tuple(range(-20, 41, 2)), 500, 0),
}


def preset_spec(name: str, trials: int | None, master_seed: int) -> SweepSpec:
    if name not in PRESETS:
        raise ConfigError(
            f"unknown preset {name!r}; choose from {sorted(PRESETS)}"
        )
    spec = PRESETS[name]()
    return SweepSpec(
        axis=spec.axis, grid=spec.grid,
        trials=spec.trials if trials is None else trials,
        master_seed=master_seed,
    )


@dataclass(frozen=True)
class SweepRow:
    """One CSV row: a (grid value, system, scheme) result."""

    axis: str
    value: float
    system: str
    scheme: str
    rate_mc: float
    rate_lb: float
    ci: float
    err: str = ""


def _validate_against_config(spec: SweepSpec, config: Config) -> None:
    problems = []
    if ZF in config.schemes:
        if spec.axis == AXIS_ELEMENTS:
            bad = [v for v in spec.grid if v <= config.user_count]
            if bad:
                problems.append(
                    f"ZF requires M > K = {config.user_count} at every grid "
                    f"value; offending M: {bad}"
                )
        elif spec.axis == AXIS_USERS:
            bad = [v for v in spec.grid if v >= config.m_elements]
            if bad:
                problems.append(
                    f"ZF requires K < M = {config.m_elements} at every grid "
                    f"value; offending K: {bad}"
                )
        elif config.m_elements <= config.user_count:
            problems.append(
                f"ZF requires M > K (M={config.m_elements}, K={config.user_count})"
            )
    if problems:
        raise ConfigError(problems)


def _point_parameters(spec: SweepSpec, config: Config, value):
    m = config.m_elements
    k = config.user_count
    power = config.transmit_power_w
    if spec.axis == AXIS_ELEMENTS:
        m = int(value)
    elif spec.axis == AXIS_USERS:
        k = int(value)
    else:
        power = 10.0 ** ((value - 30.0) / 10.0)
    return m, k, power


def _compute_point(config: Config, spec: SweepSpec,
                   profile: LargeScaleProfile, index: int) -> list[SweepRow]:
    value = spec.grid[index]
    m, k, power = _point_parameters(spec, config, value)
    point_profile = profile.subset(k) if k != profile.count else profile
    raq_fe = config.raq_frontend()
    mm_fe = config.mmimo_frontend()
    steering = config.steering(m)
    rows = []
    for system, scheme in _COMBO_ORDER:
        if system not in config.systems or scheme not in config.schemes:
            continue
        try:
            if system == RAQ:
                scenario = raq_scenario(raq_fe, steering, power, scheme)
            else:
                scenario = mmimo_scenario(mm_fe, m, power, scheme)
            report = ergodic_rates_mc(
                scenario, point_profile, spec.trials,
                seed=(spec.master_seed, index),
            )
            err = ""
            if report.failed_trials:
                err = f"{report.failed_trials} trials failed the conditioning guard"
            rows.append(SweepRow(
                axis=spec.axis, value=value, system=system, scheme=scheme,
                rate_mc=report.mean_rate, rate_lb=report.mean_lower_bound,
                ci=report.mean_ci_half_width, err=err,
            ))
        except RaqsimError as exc:
            rows.append(SweepRow(
                axis=spec.axis, value=value, system=system, scheme=scheme,
                rate_mc=math.nan, rate_lb=math.nan, ci=math.nan,
                err=str(exc),
            ))
    return rows


def _worker(args) -> tuple[int, list[SweepRow]]:
    config, spec, profile, index = args
    return index, _compute_point(config, spec, profile, index)


def worker_count(n_points: int, workers: int | None = None) -> int:
    """Resolve the worker count; RAQSIM_THREADS caps it, never the results."""
    if workers is None:
        env = os.environ.get("RAQSIM_THREADS", "")
        if env.strip():
            try:
                workers = int(env)
            except ValueError:
                raise ConfigError(f"RAQSIM_THREADS must be an integer, got {env!r}")
        else:
            workers = os.cpu_count() or 1
    return max(1, min(workers, n_points))


def run_sweep(spec: SweepSpec, config: Config,
              workers: int | None = None) -> list[SweepRow]:
    """Run one sweep campaign and return its ordered result table.

    Per-point failures are recorded in the ``err`` column and the sweep
    continues.  Output is ordered by grid index and a fixed system/scheme
    order, and is independent of the worker count.
    """
    _validate_against_config(spec, config)
    max_users = (max(int(v) for v in spec.grid)
                 if spec.axis == AXIS_USERS else config.user_count)
    _, profile = config.user_profile(count=max_users,
                                     seed=(spec.master_seed, 0))
    n_points = len(spec.grid)
    n_workers = worker_count(n_points, workers)
    tasks = [(config, spec, profile, i) for i in range(n_points)]
    results: dict[int, list[SweepRow]] = {}
    if n_workers == 1:
        for task in tasks:
            index, rows = _worker(task)
            results[index] = rows
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            for index, rows in pool.map(_worker, tasks):
                results[index] = rows
    table: list[SweepRow] = []
    for i in range(n_points):
        table.extend(results[i])
    return table


CSV_HEADER = ("axis", "value", "system", "scheme", "rate_mc", "rate_lb", "ci", "err")


def _format_number(x) -> str:
    if isinstance(x, float) and math.isnan(x):
        return ""
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def emit_outputs(table: list[SweepRow], csv_path, plot_path=None) -> None:
    """Write the delimited results and, optionally, the figure next to them."""
    if not table:
        raise DomainError("refusing to emit an empty result table")
    csv_path = Path(csv_path)
    with csv_path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in table:
            writer.writerow((
                row.axis, _format_number(row.value), row.system, row.scheme,
                _format_number(row.rate_mc), _format_number(row.rate_lb),
                _format_number(row.ci), row.err,
            ))
    if plot_path is not None:
        from .plotting import render_rate_figure

        render_rate_figure(table, plot_path)


def dump_channel_csv(config: Config, path, seed=None) -> None:
    """Write the user drop and large-scale gains used by the sweeps."""
    geometry, profile = config.user_profile(seed=seed)
    path = Path(path)
    with path.open("w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(("user", "x_m", "y_m", "distance_m", "beta_db", "beta"))
        for idx in range(geometry.count):
            x, y = geometry.positions[idx]
            beta = profile.beta[idx]
            writer.writerow((
                idx, _format_number(float(x)), _format_number(float(y)),
                _format_number(float(geometry.distances[idx])),
                _format_number(10.0 * math.log10(beta)),
                _format_number(float(beta)),
            ))
