"""Limit-cycle detection on simulated trajectories and delay/gain sweeps."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from .dde import ConstantHistory, SimConfig, Trajectory, simulate
from .errors import (
    DegenerateFrequency,
    FlaggedTrajectory,
    GainOutOfRange,
    HopfCCError,
    InsufficientTail,
    InvalidModel,
    NoTransition,
)
from .hopf import HopfPoint, critical_point
from .model import ModelParams, solve_equilibrium

MIN_PEAKS = 6


class Verdict(str, Enum):
    CONVERGED = "Converged"
    LIMIT_CYCLE = "LimitCycle"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class Thresholds:
    """Absolute amplitude thresholds and relative trend per period."""

    converge: float
    cycle: float
    trend: float = 0.02

    @classmethod
    def relative_to(cls, level: float, converge=1e-4, cycle=1e-3, trend=0.02) -> "Thresholds":
        return cls(converge=converge * level, cycle=cycle * level, trend=trend)


@dataclass(frozen=True)
class CycleReport:
    verdict: Verdict
    amplitude: float
    period: Optional[float]
    amplitude_trend: float
    n_peaks: int = 0


@dataclass(frozen=True)
class SweepRow:
    value: float
    report: Optional[CycleReport]
    tau0: Optional[float] = None
    omega0: Optional[float] = None
    error: Optional[str] = None

    @property
    def verdict(self) -> str:
        return self.report.verdict.value if self.report is not None else "ERROR"


@dataclass(frozen=True)
class RunSettings:
    """Simulation and detection knobs shared by sweeps and fits.

    ``history_factor`` scales p* for the constant initial history; amplitude
    thresholds are fractions of p*.
    """

    steps_per_delay: int = 40
    duration: float = 2000.0
    history_factor: float = 1.5
    record_stride: Optional[int] = None
    samples_per_period: int = 50
    transient_fraction: float = 0.5
    converge: float = 1e-4
    cycle: float = 1e-3
    trend: float = 0.02


def _local_extrema(y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mid = y[1:-1]
    maxima = np.flatnonzero((mid > y[:-2]) & (mid >= y[2:])) + 1
    minima = np.flatnonzero((mid < y[:-2]) & (mid <= y[2:])) + 1
    return maxima, minima


def detect_cycle(
    traj: Trajectory,
    transient_fraction: float = 0.5,
    thresholds: Optional[Thresholds] = None,
) -> CycleReport:
    """Classify the tail of a trajectory as converged, oscillating or neither.

    Without explicit thresholds they are taken relative to the tail mean.
    """
    if traj.flags.any():
        raise FlaggedTrajectory(f"trajectory flags set: {traj.flags}")
    if not 0.0 < transient_fraction < 1.0:
        raise ValueError("transient_fraction must lie in (0, 1)")
    start = int(len(traj.p) * transient_fraction)
    t, y = traj.t[start:], traj.p[start:]
    if len(y) < 3:
        raise InsufficientTail(f"only {len(y)} samples after the transient")
    if thresholds is None:
        thresholds = Thresholds.relative_to(abs(float(np.mean(y))))

    maxima, minima = _local_extrema(y)
    if len(maxima) >= 2 and len(minima) >= 1:
        amplitude = 0.5 * (float(np.mean(y[maxima])) - float(np.mean(y[minima])))
    else:
        amplitude = 0.5 * float(np.max(y) - np.min(y))
    amplitude = max(amplitude, 0.0)

    if amplitude < thresholds.converge:
        return CycleReport(Verdict.CONVERGED, amplitude, None, 0.0, len(maxima))
    if len(maxima) < MIN_PEAKS:
        raise InsufficientTail(
            f"{len(maxima)} maxima in the tail (need {MIN_PEAKS}) and amplitude {amplitude:g} "
            f"above the convergence threshold"
        )

    period = float(t[maxima[-1]] - t[maxima[0]]) / (len(maxima) - 1)
    # per-cycle half swing: each maximum against the lowest point before the next
    cycle_amps = np.array(
        [0.5 * (y[a] - np.min(y[a:b + 1])) for a, b in zip(maxima[:-1], maxima[1:])]
    )
    mean_amp = float(np.mean(cycle_amps))
    if mean_amp > 0:
        slope = np.polyfit(np.arange(len(cycle_amps), dtype=float), cycle_amps, 1)[0]
        trend = float(slope) / mean_amp
    else:
        trend = 0.0

    if amplitude >= thresholds.cycle and abs(trend) < thresholds.trend:
        verdict = Verdict.LIMIT_CYCLE
    else:
        verdict = Verdict.UNDETERMINED
    return CycleReport(verdict, amplitude, period, trend, len(maxima))


def _analytic(params: ModelParams, h: float) -> Optional[HopfPoint]:
    p_star = solve_equilibrium(params).p_star
    b = params.k * p_star * params.demand.d1(p_star)
    try:
        return critical_point(b, h)
    except (GainOutOfRange, DegenerateFrequency, InvalidModel):
        return None


def sim_config_for(
    params: ModelParams, h: float, tau: float, settings: RunSettings, hp: Optional[HopfPoint] = None
) -> SimConfig:
    dt = tau / settings.steps_per_delay
    stride = settings.record_stride
    if stride is None:
        if hp is None:
            hp = _analytic(params, h)
        stride = 1
        if hp is not None:
            stride = max(1, int(2.0 * math.pi / hp.omega0 / (settings.samples_per_period * dt)))
    return SimConfig(
        tau=tau,
        h=h,
        steps_per_delay=settings.steps_per_delay,
        duration=max(settings.duration, 10.0 * tau),
        record_stride=stride,
    )


def run_point(
    params: ModelParams,
    h: float,
    tau: float,
    settings: RunSettings = RunSettings(),
    hp: Optional[HopfPoint] = None,
) -> tuple[Trajectory, CycleReport]:
    """Simulate one (h, tau) point from the constant history and classify it."""
    p_star = solve_equilibrium(params).p_star
    traj = simulate(
        params,
        ConstantHistory(settings.history_factor * p_star),
        sim_config_for(params, h, tau, settings, hp),
    )
    thr = Thresholds.relative_to(p_star, settings.converge, settings.cycle, settings.trend)
    return traj, detect_cycle(traj, settings.transient_fraction, thr)


def sweep_tau(
    params: ModelParams,
    h: float,
    tau_grid: Sequence[float],
    settings: RunSettings = RunSettings(),
) -> list[SweepRow]:
    grid = [float(v) for v in tau_grid]
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("tau grid must be strictly increasing")
    hp = _analytic(params, h)
    rows = []
    for tau in grid:
        annot = dict(tau0=hp.tau0, omega0=hp.omega0) if hp is not None else {}
        try:
            _, report = run_point(params, h, tau, settings, hp)
            rows.append(SweepRow(tau, report, **annot))
        except (HopfCCError, ValueError) as exc:
            rows.append(SweepRow(tau, None, error=f"{type(exc).__name__}: {exc}", **annot))
    return rows


def _onset_side(params: ModelParams, h: float, tau: float, settings: RunSettings) -> bool:
    """True when the equilibrium is unstable at ``tau``.

    Probes start just off p*, so the sign of the amplitude trend separates
    decay (stable) from growth toward the cycle (unstable) even where the
    dynamics are too slow to settle within the horizon.
    """
    _, report = run_point(params, h, tau, settings)
    if report.verdict is Verdict.CONVERGED:
        return False
    return report.amplitude_trend >= 0.0


def empirical_onset(
    sweep: Sequence[SweepRow],
    params: Optional[ModelParams] = None,
    h: Optional[float] = None,
    settings: Optional[RunSettings] = None,
    width: float = 0.05,
    max_extra: int = 12,
) -> float:
    """Delay at which simulations switch from converging to oscillating.

    Takes the last Converged row below the first LimitCycle row and, when
    ``params`` and ``h`` are given, narrows the bracket by bisection.
    """
    first_lc = next((i for i, r in enumerate(sweep) if r.verdict == Verdict.LIMIT_CYCLE.value), None)
    if first_lc is None:
        raise NoTransition("sweep has no LimitCycle row")
    last_conv = next(
        (i for i in range(first_lc - 1, -1, -1) if sweep[i].verdict == Verdict.CONVERGED.value), None
    )
    if last_conv is None:
        raise NoTransition("no Converged row below the first LimitCycle row")
    lo, hi = sweep[last_conv].value, sweep[first_lc].value

    if params is not None and h is not None:
        probe = replace(settings or RunSettings(), history_factor=1.01)
        for _ in range(max_extra):
            if hi - lo < width:
                break
            mid = 0.5 * (lo + hi)
            if _onset_side(params, h, mid, probe):
                hi = mid
            else:
                lo = mid
    return 0.5 * (lo + hi)


def amplitude_scaling_fit(
    params: ModelParams,
    h: float,
    n_points: int = 5,
    settings: RunSettings = RunSettings(),
    step: float = 0.02,
) -> float:
    """Slope of log(amplitude) against log(tau - tau0) above onset."""
    if n_points < 3:
        raise ValueError("amplitude fit needs at least 3 points")
    hp = _analytic(params, h)
    if hp is None:
        raise GainOutOfRange(f"no Hopf point for h={h}")
    dtau, amps = [], []
    for i in range(1, n_points + 1):
        tau = hp.tau0 * (1.0 + step * i)
        _, report = run_point(params, h, tau, settings, hp)
        if report.verdict is not Verdict.LIMIT_CYCLE:
            raise HopfCCError(f"no settled limit cycle at tau={tau:.6g} ({report.verdict.value})")
        dtau.append(tau - hp.tau0)
        amps.append(report.amplitude)
    return float(np.polyfit(np.log(dtau), np.log(amps), 1)[0])


def measured_period(params: ModelParams, h: float, tau: float, settings: RunSettings = RunSettings()) -> float:
    _, report = run_point(params, h, tau, settings)
    if report.verdict is not Verdict.LIMIT_CYCLE:
        raise HopfCCError(f"no limit cycle at tau={tau} ({report.verdict.value})")
    return report.period


def period_trend_check(
    params: ModelParams, h: float, tau_pair: tuple[float, float], settings: RunSettings = RunSettings()
) -> bool:
    """Whether the measured period at the larger delay exceeds the smaller one's."""
    small, large = sorted(float(v) for v in tau_pair)
    if small == large:
        raise ValueError("period trend needs two distinct delays")
    return measured_period(params, h, large, settings) > measured_period(params, h, small, settings)
